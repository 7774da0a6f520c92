#include "scenario/synthetic.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace chargeplan {

namespace {

// Own range mapping on top of the engine so output does not depend on the
// standard library's distribution implementations.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    int integer(int lo, int hi) { return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }
    double real(double lo, double hi) { return lo + (hi - lo) * static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 rng_;
};

double tenths(double v) { return std::round(v * 10.0) / 10.0; }

}  // namespace

std::vector<ChargerType> default_charger_catalog() {
    return {{1, 60.0, 20000.0, 0.98},
            {2, 180.0, 50000.0, 0.98},
            {3, 360.0, 90000.0, 0.97},
            {4, 720.0, 150000.0, 0.97},
            {5, 1180.0, 300000.0, 0.97}};
}

std::vector<double> default_energy_prices(int block_minutes) {
    const int n = kMinutesPerDay / block_minutes;
    std::vector<double> p(n);
    for (int t = 0; t < n; ++t) {
        const int minute = t * block_minutes;
        const bool morning = minute >= 6 * 60 && minute < 12 * 60;
        const bool evening = minute >= 18 * 60 && minute < 20 * 60;
        p[t] = morning || evening ? 0.30 : 0.12;
    }
    return p;
}

Scenario generate_synthetic(const SyntheticOptions& o) {
    if (o.trucks <= 0 || o.locations < 2 || o.days <= 0)
        throw std::invalid_argument("synthetic: need trucks > 0, locations >= 2, days > 0");
    if (!(o.tightness >= 0.0 && o.tightness <= 1.0)) throw std::invalid_argument("synthetic: tightness must be in [0, 1]");
    if (o.block_minutes <= 0 || kMinutesPerDay % o.block_minutes != 0)
        throw std::invalid_argument("synthetic: block length must divide the day");

    Draw draw(o.seed);
    Scenario s;
    s.time_grid = {o.block_minutes, o.days};
    // Only the depot has a grid connection; retailer docks do not.
    s.locations.push_back({"DC", true});
    for (int i = 1; i < o.locations; ++i) s.locations.push_back({"R" + std::to_string(i), false});
    s.chargers = default_charger_catalog();

    std::vector<double> distance(o.locations, 0.0);
    for (int i = 1; i < o.locations; ++i) distance[i] = tenths(draw.real(70.0, 130.0));

    for (int k = 0; k < o.trucks; ++k) {
        Truck t;
        t.id = "T" + std::to_string(k + 1);
        t.battery_capacity_kwh = 300.0;
        t.consumption_kwh_per_km_ton = 0.06;
        t.tare_tons = 12.0;
        s.trucks.push_back(t);
    }

    const int B = o.block_minutes;
    const int extra = static_cast<int>(std::lround(o.tightness * 3));
    constexpr double kSpeedKmh = 60.0;
    for (int d = 0; d < o.days; ++d) {
        for (int k = 0; k < o.trucks; ++k) {
            // Staggered starts from 04:00, 90 minutes apart, with a little jitter.
            const int start = 4 * 60 + 90 * k + B * draw.integer(0, 2);
            int clock = d * kMinutesPerDay + start / B * B;
            int leg_index = 1;
            std::string here = "DC";
            auto drive = [&](const std::string& to, double km, double payload, int dwell_blocks) {
                const int travel = static_cast<int>(std::ceil(km / kSpeedKmh * 60.0 / B)) * B;
                TripLeg leg;
                leg.truck_id = s.trucks[k].id;
                leg.day = d;
                leg.leg_index = leg_index++;
                leg.origin = here;
                leg.destination = to;
                leg.departure_minute = clock;
                leg.arrival_minute = clock + travel;
                leg.travel_minutes = travel;
                leg.distance_km = km;
                leg.payload_tons = payload;
                s.legs.push_back(leg);
                clock += travel + dwell_blocks * B;
                here = to;
            };
            for (int trip = 0; trip < 2; ++trip) {
                const int r = draw.integer(1, o.locations - 1);
                const std::string retailer = "R" + std::to_string(r);
                const double payload = draw.integer(12, 20);
                drive(retailer, distance[r], payload, 1 + extra);
                drive("DC", distance[r], 0.0, trip == 0 ? 2 + extra + draw.integer(0, 1) : 0);
            }
        }
    }

    s.prices.peak_price_per_kw = 0.5;
    s.prices.default_energy_per_kwh = default_energy_prices(o.block_minutes);
    s.params.alpha = 1.0;
    s.params.slack_minutes = o.block_minutes;
    s.params.amortize_in_objective = true;
    s.params.amortization_years = 10.0;
    return s;
}

}  // namespace chargeplan

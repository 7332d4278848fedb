#include "liftnet/synth_housing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "liftnet/rng.hpp"

namespace liftnet::data {

namespace {

struct Metro {
    double lat, lon;
    double spread_lat, spread_lon;
    double weight;
    double income_premium;   // in units of ln-income
    double value_premium;    // in 10^5-dollar units
    const char* bay_tag;     // category used for the most coastal tracts
};

// Rough metro mixture along the coastline, south to north.
const Metro kMetros[] = {
    {32.72, -117.16, 0.30, 0.25, 0.12, 0.10, 0.30, "NEAR OCEAN"},
    {34.05, -118.25, 0.45, 0.50, 0.38, 0.12, 0.28, "NEAR OCEAN"},
    {36.75, -119.77, 0.60, 0.55, 0.12, -0.18, -0.12, "INLAND"},
    {37.77, -122.42, 0.35, 0.35, 0.26, 0.38, 0.55, "NEAR BAY"},
    {38.58, -121.49, 0.45, 0.50, 0.12, 0.02, 0.05, "INLAND"},
};

// Approximate coastline longitude at a given latitude.
double coast_longitude(double lat) { return -118.3 - 1.05 * (lat - 33.8); }

int pick_metro(Rng& rng) {
    double u = rng.uniform();
    for (int i = 0; i < 5; ++i) {
        u -= kMetros[i].weight;
        if (u <= 0.0) return i;
    }
    return 4;
}

}  // namespace

void write_synthetic_housing_csv(const std::string& path, int rows, uint64_t seed) {
    if (rows < 1) throw std::invalid_argument("write_synthetic_housing_csv: rows must be ≥ 1");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_synthetic_housing_csv: cannot write " + path);

    Rng rng(seed);
    out << "longitude,latitude,housing_median_age,total_rooms,total_bedrooms,population,households,"
           "median_income,median_house_value,ocean_proximity\n";
    out.precision(10);

    for (int i = 0; i < rows; ++i) {
        const Metro& metro = kMetros[pick_metro(rng)];
        const double lat = metro.lat + metro.spread_lat * rng.gaussian();
        const double lon = metro.lon + metro.spread_lon * rng.gaussian();
        const double coast_dist = std::max(0.0, lon - coast_longitude(lat));  // degrees inland

        std::string proximity;
        if (rng.uniform() < 0.0012) {
            proximity = "ISLAND";
        } else if (coast_dist < 0.25) {
            proximity = metro.bay_tag;
        } else if (coast_dist < 1.4) {
            proximity = "<1H OCEAN";
        } else {
            proximity = "INLAND";
        }

        double income = std::exp(std::log(2.9) + 0.45 * rng.gaussian() + metro.income_premium +
                                 0.10 * std::exp(-coast_dist));
        income = std::clamp(income, 0.4999, 15.0001);

        const int age = std::clamp(static_cast<int>(std::round(52.0 * std::pow(rng.uniform(), 0.85))), 1, 52);

        const double households = std::clamp(std::exp(std::log(420.0) + 0.65 * rng.gaussian()), 10.0, 6000.0);
        const double rooms_per_household = 3.6 + 1.9 * rng.uniform() + 0.35 * income / 5.0;
        const double total_rooms = std::max(20.0, households * rooms_per_household * (1.0 + 0.08 * rng.gaussian()));
        const double bedrooms_frac = 0.18 + 0.06 * rng.uniform();
        const double total_bedrooms = std::max(5.0, total_rooms * bedrooms_frac);
        const double occupancy = 2.3 + 1.3 * rng.uniform();
        const double population = std::max(20.0, households * occupancy * (1.0 + 0.06 * rng.gaussian()));

        // Price surface in 10^5-dollar units: concave in income, coastal and
        // metro premiums, a multi-scale neighborhood field over lat/long
        // (location explains a large share of price, as in the real data),
        // mild age and crowding effects, Gaussian noise.
        const double neighborhood = 0.34 * std::sin(2.3 * lat + 1.7) * std::cos(1.9 * lon) +
                                    0.27 * std::sin(5.1 * lat - 0.6) * std::sin(3.7 * lon + 2.2) +
                                    0.21 * std::cos(8.3 * lat) * std::sin(6.1 * lon);
        double value = 0.25 + 0.46 * std::pow(income, 0.92) +
                       0.90 * std::exp(-(coast_dist * coast_dist) / (0.8 * 0.8)) + metro.value_premium +
                       neighborhood + 0.004 * age - 0.22 * std::tanh((population / households) / 4.0) +
                       0.035 * income * std::exp(-coast_dist) + 0.36 * rng.gaussian();
        value = std::clamp(value, 0.14999, 5.00001);

        const bool missing_bedrooms = rng.uniform() < 0.01;
        out << lon << ',' << lat << ',' << age << ',' << std::round(total_rooms) << ',';
        if (!missing_bedrooms) out << std::round(total_bedrooms);
        out << ',' << std::round(population) << ',' << std::round(households) << ',' << income << ','
            << std::round(value * 1e5) << ',' << proximity << '\n';
    }
}

}  // namespace liftnet::data

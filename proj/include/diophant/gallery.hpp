#pragma once

#include <string>
#include <vector>

#include "diophant/error.hpp"
#include "diophant/theta.hpp"

namespace diophant {

// Expected exponent annotations distinguish true limit values from what a
// desk-scale run can reach.
struct GalleryExpectation {
    std::string quantity; // "omega_hat", "omega_star", ...
    double value = 0.0;
    bool is_limit = true; // true: T -> infinity target; false: desk-scale band
    std::string source;
};

struct GalleryEntry {
    std::string name;
    std::string spec_text;
    std::string notes;
    std::vector<GalleryExpectation> expected;
};

// Curated reproducible inputs. The Fibonacci-word continued fraction is a
// candidate for extremal behavior: its desk-scale exponents should trend
// toward omega_hat = (3+sqrt5)/2 ~ 2.618 and omega_star = 3+sqrt5 ~ 5.236
// without ever being certified equal to a true extremal number.
inline std::vector<GalleryEntry> builtin_gallery() {
    std::vector<GalleryEntry> g;
    g.push_back({"cbrt2",
                 "cbrt:2",
                 "real cube root of 2; generic cubic irrational",
                 {{"omega_hat", 2.0, true, "Minkowski floor, generic value"},
                  {"omega_star_lower", 3.0, true, "Davenport-Schmidt"},
                  {"omega_hat_band_low", 1.6, false, "pilot at T = 1e5"},
                  {"omega_hat_band_high", 2.4, false, "pilot at T = 1e5"}}});
    g.push_back({"fib_cf_40",
                 "cf-fib:40",
                 "continued fraction [0; w_1..w_40], w the Fibonacci word over {1,2}; "
                 "extremal-number candidate evaluated as an exact convergent",
                 {{"omega_hat", 2.6180339887498949, true, "extremal value (3+sqrt5)/2"},
                  {"omega_star", 5.2360679774997898, true, "extremal value 3+sqrt5"},
                  {"max_gamma_band", 2.2, false, "pilot at T = 1e6"}}});
    for (int i = 1; i <= 3; ++i)
        g.push_back({"rand_" + std::to_string(i),
                     "rand:" + std::to_string(i),
                     "seeded random theta; expected generic behavior",
                     {{"omega_hat", 2.0, true, "almost-every theta"},
                      {"omega_hat_band_low", 1.6, false, "pilot at T = 1e5"},
                      {"omega_hat_band_high", 2.4, false, "pilot at T = 1e5"}}});
    return g;
}

inline GalleryEntry gallery_lookup(const std::string &name) {
    for (auto &e : builtin_gallery())
        if (e.name == name)
            return e;
    throw config_error("no gallery entry named '" + name + "'");
}

// Resolve "gallery:NAME" to the entry's spec text; anything else passes through.
inline std::string resolve_theta_text(const std::string &text) {
    const std::string prefix = "gallery:";
    if (text.rfind(prefix, 0) == 0)
        return gallery_lookup(text.substr(prefix.size())).spec_text;
    return text;
}

} // namespace diophant

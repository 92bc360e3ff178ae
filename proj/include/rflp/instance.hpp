#ifndef RFLP_INSTANCE_HPP
#define RFLP_INSTANCE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rflp {

struct point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const point&) const = default;
};

// Problem data. Customers and candidate sites share the same n nodes: node i
// is both customer i and candidate site i.
struct instance {
    std::size_t n = 0;
    std::vector<point> coords;             // in the unit square
    std::vector<std::int64_t> demands;     // h_i >= 0
    std::vector<std::int64_t> fixed_costs; // f_j > 0
    double failure_prob = 0.0;             // p in [0, 1), same for every site

    // Throws std::invalid_argument when any field violates its invariant.
    void validate() const;

    bool operator==(const instance&) const = default;
};

// Objective weighting and the allocation rule.
//
// fixed_m empty  -> every customer is served by all selected sites, ordered
//                   by distance (m equals the number of selected sites).
// fixed_m = k    -> every customer is served by its k nearest selected sites.
struct model_config {
    double alpha = 1.0;
    std::optional<std::uint32_t> fixed_m;

    static model_config m2(double alpha = 1.0) { return {alpha, 2}; }
    static model_config msum(double alpha = 1.0) { return {alpha, std::nullopt}; }

    std::size_t levels_for(std::size_t selected_count) const {
        return fixed_m ? *fixed_m : selected_count;
    }

    // "m2", "m3", ... for fixed rules, "msum" for the selected-count rule.
    std::string name() const {
        return fixed_m ? "m" + std::to_string(*fixed_m) : "msum";
    }

    void validate() const;
};

} // namespace rflp

#endif

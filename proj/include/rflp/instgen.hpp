#ifndef RFLP_INSTGEN_HPP
#define RFLP_INSTGEN_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rflp/instance.hpp"

namespace rflp {

// Parameters for seeded uniform instance generation. Defaults match the
// standard benchmark ranges: coordinates in [0,1], demands {0..1000}, fixed
// costs {500..1500}, failure probability 0.05.
struct gen_params {
    std::size_t n = 0;
    double coord_min = 0.0;
    double coord_max = 1.0;
    std::int64_t demand_min = 0;
    std::int64_t demand_max = 1000;
    std::int64_t fixed_cost_min = 500;
    std::int64_t fixed_cost_max = 1500;
    double failure_prob = 0.05;
    std::uint64_t seed = 0;

    void validate() const;
};

// Draws an instance fully determined by params.seed. Stream order, using one
// xoshiro256++ stream seeded with params.seed: per node x then y coordinate
// (next_double scaled to the coordinate range), then all demands, then all
// fixed costs (next_int, both endpoints inclusive).
instance generate_instance(const gen_params& params);

// Free-form key/value pairs stored alongside an instance (seed, generator
// parameters). Ignored by readers except for round-tripping.
using instance_metadata = std::vector<std::pair<std::string, std::string>>;

// Versioned plain-text instance format; see README for the layout. Doubles
// are written with 17 significant digits so read(write(x)) == x exactly.
void write_instance(const instance& inst, std::ostream& out,
                    const instance_metadata& metadata = {});
void write_instance_file(const instance& inst, const std::filesystem::path& path,
                         const instance_metadata& metadata = {});

// Throws parse_error naming the offending line on malformed input.
instance read_instance(std::istream& in, const std::string& source_name = "<stream>",
                       instance_metadata* metadata = nullptr);
// A path of "-" reads standard input.
instance read_instance_file(const std::filesystem::path& path,
                            instance_metadata* metadata = nullptr);

} // namespace rflp

#endif

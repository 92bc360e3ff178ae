#include "rflp/instgen.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "rflp/errors.hpp"
#include "rflp/rng.hpp"

namespace rflp {

namespace {

constexpr const char* k_format_tag = "rflp-instance";
constexpr int k_format_version = 1;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void gen_params::validate() const {
    if (n == 0) throw std::invalid_argument("gen: node count must be positive");
    if (coord_min > coord_max) throw std::invalid_argument("gen: empty coordinate range");
    if (!(coord_min >= 0.0 && coord_max <= 1.0)) {
        throw std::invalid_argument("gen: coordinate range must lie within [0, 1]");
    }
    if (demand_min > demand_max || demand_min < 0) {
        throw std::invalid_argument("gen: bad demand range");
    }
    if (fixed_cost_min > fixed_cost_max || fixed_cost_min <= 0) {
        throw std::invalid_argument("gen: bad fixed cost range");
    }
    if (!(failure_prob >= 0.0 && failure_prob < 1.0)) {
        throw std::invalid_argument("gen: failure probability must lie in [0, 1)");
    }
}

instance generate_instance(const gen_params& params) {
    params.validate();
    xoshiro256pp rng(params.seed);

    instance inst;
    inst.n = params.n;
    inst.failure_prob = params.failure_prob;
    inst.coords.resize(params.n);
    inst.demands.resize(params.n);
    inst.fixed_costs.resize(params.n);

    const double span = params.coord_max - params.coord_min;
    for (auto& c : inst.coords) {
        c.x = params.coord_min + span * rng.next_double();
        c.y = params.coord_min + span * rng.next_double();
    }
    for (auto& h : inst.demands) h = rng.next_int(params.demand_min, params.demand_max);
    for (auto& f : inst.fixed_costs) f = rng.next_int(params.fixed_cost_min, params.fixed_cost_max);
    return inst;
}

void write_instance(const instance& inst, std::ostream& out, const instance_metadata& metadata) {
    inst.validate();
    out << k_format_tag << " v" << k_format_version << '\n';
    out << "n " << inst.n << '\n';
    out << "failure_prob " << fmt_double(inst.failure_prob) << '\n';
    for (const auto& [key, value] : metadata) {
        out << "meta " << key << ' ' << value << '\n';
    }
    out << "coords\n";
    for (const auto& c : inst.coords) {
        out << fmt_double(c.x) << ' ' << fmt_double(c.y) << '\n';
    }
    out << "demands\n";
    for (auto h : inst.demands) out << h << '\n';
    out << "fixed_costs\n";
    for (auto f : inst.fixed_costs) out << f << '\n';
    out << "end\n";
}

void write_instance_file(const instance& inst, const std::filesystem::path& path,
                         const instance_metadata& metadata) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_instance(inst, out, metadata);
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

namespace {

// Line-oriented reader that tracks position for error messages.
class line_reader {
public:
    line_reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    bool next(std::string& line) {
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue; // blank lines are allowed anywhere
            return true;
        }
        return false;
    }

    std::string require(const std::string& what) {
        std::string line;
        if (!next(line)) fail("unexpected end of file, expected " + what);
        return line;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw parse_error(source_, line_no_, message);
    }

private:
    std::istream& in_;
    std::string source_;
    std::size_t line_no_ = 0;
};

double parse_double(line_reader& r, const std::string& token, const std::string& field) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(token, &pos);
        if (pos != token.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        r.fail("field '" + field + "': cannot parse '" + token + "' as a real number");
    }
}

std::int64_t parse_int(line_reader& r, const std::string& token, const std::string& field) {
    try {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(token, &pos);
        if (pos != token.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        r.fail("field '" + field + "': cannot parse '" + token + "' as an integer");
    }
}

} // namespace

instance read_instance(std::istream& in, const std::string& source_name,
                       instance_metadata* metadata) {
    line_reader r(in, source_name);

    const std::string header = r.require("format header");
    {
        std::istringstream hs(header);
        std::string tag, version;
        hs >> tag >> version;
        if (tag != k_format_tag) r.fail("not an instance file (bad header '" + header + "')");
        if (version != "v" + std::to_string(k_format_version)) {
            r.fail("unsupported format version '" + version + "', expected v" +
                   std::to_string(k_format_version));
        }
    }

    instance inst;
    bool have_n = false;
    bool have_p = false;

    std::string line;
    for (;;) {
        line = r.require("a field or the 'coords' section");
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "coords") break;
        std::string value;
        if (key == "n") {
            ls >> value;
            inst.n = static_cast<std::size_t>(parse_int(r, value, "n"));
            if (inst.n == 0) r.fail("field 'n': must be positive");
            have_n = true;
        } else if (key == "failure_prob") {
            ls >> value;
            inst.failure_prob = parse_double(r, value, "failure_prob");
            have_p = true;
        } else if (key == "meta") {
            std::string mkey;
            ls >> mkey;
            std::string rest;
            std::getline(ls, rest);
            if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
            if (metadata) metadata->emplace_back(mkey, rest);
        } else {
            r.fail("unknown field '" + key + "'");
        }
    }
    if (!have_n) r.fail("missing field 'n' before coords");
    if (!have_p) r.fail("missing field 'failure_prob' before coords");

    inst.coords.resize(inst.n);
    for (std::size_t i = 0; i < inst.n; ++i) {
        line = r.require("coordinate pair " + std::to_string(i));
        std::istringstream ls(line);
        std::string xs, ys, extra;
        ls >> xs >> ys;
        if (ys.empty() || (ls >> extra)) r.fail("expected exactly two coordinates");
        inst.coords[i].x = parse_double(r, xs, "coords[" + std::to_string(i) + "].x");
        inst.coords[i].y = parse_double(r, ys, "coords[" + std::to_string(i) + "].y");
    }

    auto read_section = [&](const char* name, std::vector<std::int64_t>& dst) {
        line = r.require(std::string("section '") + name + "'");
        if (line != name) r.fail("expected section '" + std::string(name) + "', got '" + line + "'");
        dst.resize(inst.n);
        for (std::size_t i = 0; i < inst.n; ++i) {
            line = r.require(std::string(name) + " value " + std::to_string(i));
            std::istringstream ls(line);
            std::string tok, extra;
            ls >> tok;
            if (ls >> extra) r.fail("expected a single integer");
            dst[i] = parse_int(r, tok, std::string(name) + "[" + std::to_string(i) + "]");
        }
    };
    read_section("demands", inst.demands);
    read_section("fixed_costs", inst.fixed_costs);

    line = r.require("'end' marker");
    if (line != "end") r.fail("expected 'end', got '" + line + "'");

    try {
        inst.validate();
    } catch (const std::invalid_argument& e) {
        r.fail(e.what());
    }
    return inst;
}

instance read_instance_file(const std::filesystem::path& path, instance_metadata* metadata) {
    if (path == "-") return read_instance(std::cin, "<stdin>", metadata);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_instance(in, path.string(), metadata);
}

} // namespace rflp

#ifndef HYPERRADON_CONFIG_HPP
#define HYPERRADON_CONFIG_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hyperradon/error.hpp"
#include "hyperradon/params.hpp"
#include "hyperradon/quadrature.hpp"
#include "hyperradon/testfuncs.hpp"
#include "hyperradon/transforms.hpp"

namespace hyperradon {

/// Every recognised "section.key" with its default value, in output order.
inline const std::vector<std::pair<std::string, std::string>>& config_defaults()
{
    static const std::vector<std::pair<std::string, std::string>> table = {
        {"space.field", "R"},
        {"space.p", "0"},
        {"space.q", "4"},
        {"space.variant", "projective"},
        {"probe.name", "gaussian"},
        {"probe.beta", "1"},
        {"probe.radius", "1"},
        {"probe.i", "0"},
        {"probe.j", "-1"},
        {"probe.index", "-1"},
        {"grid.s_min", "-4"},
        {"grid.s_max", "9"},
        {"grid.h", "0.05"},
        {"grid.method", "auto"},
        {"grid.operator", "auto"},
        {"grid.noise_limit", "1e-3"},
        {"quadrature.nodes_per_dim", "16"},
        {"quadrature.sphere_nodes", "4"},
        {"quadrature.panel_width", "2"},
        {"quadrature.truncation_radius", "10"},
        {"quadrature.target_rel_tol", "1e-12"},
        {"quadrature.abs_tol", "0"},
        {"quadrature.doubling_rounds", "3"},
        {"quadrature.threads", "0"},
        {"direct.nodes_per_dim", "4"},
        {"direct.panel_width", "1"},
        {"direct.truncation_radius", "5"},
        {"direct.target_rel_tol", "1e-3"},
        {"direct.doubling_rounds", "1"},
        {"verify.suite", "theorem-vi"},
        {"verify.decay_order", "auto"},
        {"verify.slope_lo", "5"},
        {"verify.slope_hi", "8"},
        {"verify.slope_tol", "0.05"},
        {"verify.parity_tol", "1e-6"},
        {"verify.odd_min", "1e-3"},
        {"verify.support_tol", "1e-8"},
        {"verify.exchange_tol", "1e-4"},
        {"verify.two_route_tol", "1e-3"},
        {"verify.consistency_tol", "1e-8"},
        {"verify.symmetry_tol", "1e-9"},
        {"verify.homogeneity_tol", "1e-6"},
        {"output.csv", "transform.csv"},
        {"output.json", ""},
        {"output.dir", "sweep_out"},
        {"output.gnuplot", "false"},
        {"sweep.spaces", "R,0,2; R,0,4; R,1,1; R,0,5; C,0,2"},
        {"sweep.suites", "auto"},
    };
    return table;
}

/// Flat "section.key" -> value map. Later layers override earlier ones.
class ConfigMap {
public:
    ConfigMap()
    {
        for (const auto& [k, v] : config_defaults()) {
            values_[k] = v;
        }
    }

    static bool known(const std::string& key)
    {
        const auto& t = config_defaults();
        return std::any_of(t.begin(), t.end(), [&](const auto& kv) { return kv.first == key; });
    }

    void set(const std::string& key, const std::string& value)
    {
        require(known(key), errc::invalid_argument, "unknown config key '" + key + "'");
        values_[key] = value;
    }

    /// Reads `[section]` / `key = value` text. Comments start with ';' or '#'
    /// at the start of a line or after whitespace.
    void merge_ini(std::istream& in, const std::string& origin = "config")
    {
        std::string cleaned, line;
        while (std::getline(in, line)) {
            for (std::size_t i = 0; i < line.size(); ++i) {
                if ((line[i] == ';' || line[i] == '#') && (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) {
                    line.erase(i);
                    break;
                }
            }
            cleaned += line + "\n";
        }
        std::istringstream text(cleaned);
        boost::property_tree::ptree tree;
        try {
            boost::property_tree::ini_parser::read_ini(text, tree);
        } catch (const boost::property_tree::ini_parser_error& e) {
            fail(errc::invalid_argument, origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
        }
        for (const auto& [section, body] : tree) {
            require(body.data().empty(), errc::invalid_argument,
                    origin + ": key '" + section + "' outside any section");
            for (const auto& [key, value] : body) {
                set(section + "." + key, value.data());
            }
        }
    }

    void merge_ini_text(const std::string& text)
    {
        std::istringstream in(text);
        merge_ini(in);
    }

    const std::string& get(const std::string& key) const
    {
        auto it = values_.find(key);
        require(it != values_.end(), errc::invalid_argument, "unknown config key '" + key + "'");
        return it->second;
    }

    double number(const std::string& key) const
    {
        const std::string& v = get(key);
        double out = 0.0;
        const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
        require(r.ec == std::errc() && r.ptr == v.data() + v.size(), errc::invalid_argument,
                key + ": '" + v + "' is not a number");
        return out;
    }

    int integer(const std::string& key) const
    {
        const std::string& v = get(key);
        int out = 0;
        const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
        require(r.ec == std::errc() && r.ptr == v.data() + v.size(), errc::invalid_argument,
                key + ": '" + v + "' is not an integer");
        return out;
    }

    bool boolean(const std::string& key) const
    {
        const std::string& v = get(key);
        if (v == "true" || v == "1" || v == "yes" || v == "on") {
            return true;
        }
        if (v == "false" || v == "0" || v == "no" || v == "off" || v.empty()) {
            return false;
        }
        fail(errc::invalid_argument, key + ": '" + v + "' is not a boolean");
    }

    /// Entries in the fixed table order.
    std::vector<std::pair<std::string, std::string>> entries() const
    {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& [k, v] : config_defaults()) {
            out.emplace_back(k, values_.at(k));
        }
        return out;
    }

private:
    std::map<std::string, std::string> values_;
};

inline FieldKind parse_field(const std::string& s)
{
    if (s == "R" || s == "real" || s == "REAL") {
        return FieldKind::real;
    }
    if (s == "C" || s == "complex" || s == "COMPLEX") {
        return FieldKind::complex;
    }
    if (s == "H" || s == "quaternion" || s == "QUATERNION") {
        return FieldKind::quaternion;
    }
    fail(errc::invalid_argument, "unknown field '" + s + "' (use R, C or H)");
}

inline Variant parse_variant(const std::string& s)
{
    if (s == "projective" || s == "PROJECTIVE") {
        return Variant::projective;
    }
    if (s == "nonprojective" || s == "REAL_NONPROJECTIVE" || s == "non-projective") {
        return Variant::real_nonprojective;
    }
    fail(errc::invalid_argument, "unknown variant '" + s + "'");
}

inline std::string trim(std::string s)
{
    const auto ws = [](unsigned char c) { return std::isspace(c); };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    return s;
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

/// "R,0,4" or "R,0,6,nonprojective".
inline SpaceParams parse_space(const std::string& text)
{
    const auto parts = split(text, ',');
    require(parts.size() == 3 || parts.size() == 4, errc::invalid_argument,
            "space '" + text + "' should read field,p,q[,variant]");
    auto to_int = [&](const std::string& v) {
        int out = 0;
        const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
        require(r.ec == std::errc() && r.ptr == v.data() + v.size(), errc::invalid_argument,
                "space '" + text + "': '" + v + "' is not an integer");
        return out;
    };
    return SpaceParams(parse_field(parts[0]), to_int(parts[1]), to_int(parts[2]),
                       parts.size() == 4 ? parse_variant(parts[3]) : Variant::projective);
}

inline RadonMethod parse_method(const std::string& s)
{
    if (s == "auto") {
        return RadonMethod::automatic;
    }
    if (s == "direct") {
        return RadonMethod::direct;
    }
    if (s == "reduced") {
        return RadonMethod::reduced;
    }
    fail(errc::invalid_argument, "unknown method '" + s + "'");
}

inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names = {"consistency", "lemmaG", "support", "exchange",
                                                   "parity", "schwartz", "theorem-vi"};
    return names;
}

struct VerifyOptions {
    std::string suite = "theorem-vi";
    std::optional<int> decay_order; // per-suite default when unset
    double slope_lo = 5.0;
    double slope_hi = 8.0;
    double slope_tol = 0.05;
    double parity_tol = 1e-6;
    double odd_min = 1e-3;
    double support_tol = 1e-8;
    double exchange_tol = 1e-4;
    double two_route_tol = 1e-3;
    double consistency_tol = 1e-8;
    double symmetry_tol = 1e-9;
    double homogeneity_tol = 1e-6;
};

struct OutputOptions {
    std::string csv;
    std::string json;
    std::string dir;
    bool gnuplot = false;
};

/// Fully resolved run description.
struct RunConfig {
    SpaceParams space;
    ProbeSpec probe;
    GridSpec grid;
    RadonMethod method = RadonMethod::automatic;
    std::string operator_text = "auto";
    double noise_limit = 1e-3;
    QuadratureSpec quad;
    QuadratureSpec direct;
    VerifyOptions verify;
    OutputOptions output;
    std::vector<SpaceParams> sweep_spaces;
    std::string sweep_suites = "auto";
    ConfigMap source;

    /// The operator to apply on the Abel side, if any: "auto" means build_D
    /// when d(q-p) > 1, "none" disables it, otherwise a list of lambdas.
    std::optional<OperatorD> operator_d() const
    {
        if (operator_text == "none") {
            return std::nullopt;
        }
        if (operator_text == "auto") {
            if (space.codim() > 1) {
                return build_D(space);
            }
            return std::nullopt;
        }
        std::vector<double> lambdas;
        for (const std::string& item : split(operator_text, ',')) {
            double v = 0.0;
            const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
            require(r.ec == std::errc() && r.ptr == item.data() + item.size() && v > 0, errc::invalid_argument,
                    "grid.operator: '" + item + "' is not a positive number");
            lambdas.push_back(v);
        }
        return operator_from_lambdas(std::move(lambdas));
    }
};

inline QuadratureSpec read_quadrature(const ConfigMap& m, const std::string& sec, const QuadratureSpec& base)
{
    QuadratureSpec q = base;
    q.nodes_per_dim = m.integer(sec + ".nodes_per_dim");
    q.panel_width = m.number(sec + ".panel_width");
    q.truncation_radius = m.number(sec + ".truncation_radius");
    q.target_rel_tol = m.number(sec + ".target_rel_tol");
    q.doubling_rounds = m.integer(sec + ".doubling_rounds");
    return q;
}

inline RunConfig resolve(const ConfigMap& m)
{
    RunConfig c;
    c.source = m;
    c.space = SpaceParams(parse_field(m.get("space.field")), m.integer("space.p"), m.integer("space.q"),
                          parse_variant(m.get("space.variant")));
    c.probe.name = m.get("probe.name");
    c.probe.beta = m.number("probe.beta");
    c.probe.radius = m.number("probe.radius");
    c.probe.i = m.integer("probe.i");
    c.probe.j = m.integer("probe.j");
    c.probe.index = m.integer("probe.index");
    c.grid.s_min = m.number("grid.s_min");
    c.grid.s_max = m.number("grid.s_max");
    c.grid.h = m.number("grid.h");
    (void)c.grid.size();
    c.method = parse_method(m.get("grid.method"));
    c.operator_text = m.get("grid.operator");
    c.noise_limit = m.number("grid.noise_limit");
    require(c.noise_limit > 0, errc::invalid_argument, "grid.noise_limit must be positive");

    c.quad = read_quadrature(m, "quadrature", QuadratureSpec{});
    c.quad.sphere_nodes = m.integer("quadrature.sphere_nodes");
    c.quad.abs_tol = m.number("quadrature.abs_tol");
    const int threads = m.integer("quadrature.threads");
    require(threads >= 0, errc::invalid_argument, "quadrature.threads must be >= 0");
    c.quad.threads = threads == 0 ? static_cast<int>(std::max(1u, std::thread::hardware_concurrency())) : threads;
    c.quad.validate();
    c.direct = read_quadrature(m, "direct", c.quad);
    c.direct.validate();

    VerifyOptions& v = c.verify;
    v.suite = m.get("verify.suite");
    require(std::find(suite_names().begin(), suite_names().end(), v.suite) != suite_names().end(),
            errc::invalid_argument, "unknown suite '" + v.suite + "'");
    if (m.get("verify.decay_order") != "auto") {
        v.decay_order = m.integer("verify.decay_order");
        require(*v.decay_order >= 0, errc::invalid_argument, "verify.decay_order must be >= 0");
    }
    v.slope_lo = m.number("verify.slope_lo");
    v.slope_hi = m.number("verify.slope_hi");
    v.slope_tol = m.number("verify.slope_tol");
    v.parity_tol = m.number("verify.parity_tol");
    v.odd_min = m.number("verify.odd_min");
    v.support_tol = m.number("verify.support_tol");
    v.exchange_tol = m.number("verify.exchange_tol");
    v.two_route_tol = m.number("verify.two_route_tol");
    v.consistency_tol = m.number("verify.consistency_tol");
    v.symmetry_tol = m.number("verify.symmetry_tol");
    v.homogeneity_tol = m.number("verify.homogeneity_tol");

    c.output.csv = m.get("output.csv");
    c.output.json = m.get("output.json");
    c.output.dir = m.get("output.dir");
    c.output.gnuplot = m.boolean("output.gnuplot");

    // Spaces are separated by ';' or whitespace.
    std::string spaces = m.get("sweep.spaces");
    std::replace_if(spaces.begin(), spaces.end(), [](unsigned char ch) { return std::isspace(ch); }, ';');
    for (const std::string& item : split(spaces, ';')) {
        c.sweep_spaces.push_back(parse_space(item));
    }
    c.sweep_suites = m.get("sweep.suites");
    if (c.sweep_suites != "auto") {
        for (const std::string& s : split(c.sweep_suites, ',')) {
            require(std::find(suite_names().begin(), suite_names().end(), s) != suite_names().end(),
                    errc::invalid_argument, "unknown suite '" + s + "' in sweep.suites");
        }
    }
    (void)c.operator_d();
    return c;
}

} // namespace hyperradon

#endif // HYPERRADON_CONFIG_HPP

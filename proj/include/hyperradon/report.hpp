#ifndef HYPERRADON_REPORT_HPP
#define HYPERRADON_REPORT_HPP

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "hyperradon/config.hpp"
#include "hyperradon/transforms.hpp"
#include "hyperradon/verify.hpp"
#include "hyperradon/version.hpp"

namespace hyperradon {

/// Shortest decimal that reads back to the same double.
inline std::string shortest(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

/// `s,Rf,Af,ADf,err`; ADf is empty where the stencil does not reach.
inline std::string grid_csv(const TransformGrid& g, bool gnuplot = false)
{
    std::string out = gnuplot ? "# s,Rf,Af,ADf,err\n" : "s,Rf,Af,ADf,err\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        out += shortest(g.s[i]);
        out += ',';
        out += shortest(g.rf[i]);
        out += ',';
        out += shortest(g.af[i]);
        out += ',';
        if (g.adf[i]) {
            out += shortest(*g.adf[i]);
        }
        out += ',';
        out += shortest(g.point_err[i]);
        out += '\n';
    }
    return out;
}

/// Writes via a temporary file in the same directory and a rename.
inline void write_atomic(const std::filesystem::path& path, const std::string& text)
{
    namespace fs = std::filesystem;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        require(static_cast<bool>(out), errc::invalid_argument, "cannot write " + tmp.string());
        out << text;
        out.flush();
        require(static_cast<bool>(out), errc::invalid_argument, "write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        fail(errc::invalid_argument, "cannot rename onto " + path.string() + ": " + ec.message());
    }
}

inline nlohmann::ordered_json config_json(const ConfigMap& m)
{
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto& [key, value] : m.entries()) {
        const auto dot = key.find('.');
        out[key.substr(0, dot)][key.substr(dot + 1)] = value;
    }
    return out;
}

/// JSON number, or null when not finite.
inline nlohmann::ordered_json json_number(double x)
{
    if (!std::isfinite(x)) {
        return nullptr;
    }
    return x;
}

inline nlohmann::ordered_json report_json(const VerificationReport& r, const ConfigMap& m)
{
    nlohmann::ordered_json out;
    out["config"] = config_json(m);
    out["suite"] = r.suite;
    out["space"] = r.space.label();
    out["probe"] = r.probe;
    out["checks"] = nlohmann::ordered_json::array();
    for (const Check& c : r.checks) {
        out["checks"].push_back({{"name", c.name},
                                 {"measured", json_number(c.measured)},
                                 {"threshold", json_number(c.threshold)},
                                 {"pass", c.pass},
                                 {"noise_floor", json_number(c.noise_floor)}});
    }
    out["pass"] = r.passed();
    out["version"] = version;
    return out;
}

} // namespace hyperradon

#endif // HYPERRADON_REPORT_HPP

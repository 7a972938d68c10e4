#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "psel/closed_form.hpp"

namespace psel {

using ConfigMap = std::map<std::string, std::string>;

inline std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

// Flat `key = value` lines, '#' starts a comment, keys are dotted paths.
inline ConfigMap parse_config_text(const std::string& text) {
    ConfigMap cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        if (cfg.count(key))
            throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key " + key);
        cfg[key] = value;
    }
    return cfg;
}

inline ConfigMap parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

// Numeric literal, with `pi:X` meaning X*pi so angles can be written the way
// figure captions state them.
inline double parse_number(const std::string& raw) {
    std::string text = raw;
    double scale = 1.0;
    if (text.rfind("pi:", 0) == 0) {
        scale = pi;
        text = text.substr(3);
    }
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        throw ConfigError("malformed number: " + raw);
    return scale * v;
}

inline double cfg_number(const ConfigMap& cfg, const std::string& key, double fallback) {
    const auto it = cfg.find(key);
    return it == cfg.end() ? fallback : parse_number(it->second);
}

inline std::string cfg_string(const ConfigMap& cfg, const std::string& key,
                              const std::string& fallback) {
    const auto it = cfg.find(key);
    return it == cfg.end() ? fallback : it->second;
}

inline const std::vector<std::string>& known_setup_keys() {
    static const std::vector<std::string> keys = {
        "pre.theta",     "pre.phi",       "post.theta", "post.phi",  "channel.gamma",
        "channel.p",     "channel.q_bar", "pointer.sigma", "pointer.n_bar", "pointer.r",
        "pointer.chi",   "pointer.a",     "pointer.b",  "s"};
    return keys;
}

inline const std::vector<std::string>& known_sweep_keys() {
    static const std::vector<std::string> keys = {"sweep.axis",  "sweep.start",  "sweep.stop",
                                                  "sweep.count", "sweep.axis2",  "sweep.start2",
                                                  "sweep.stop2", "sweep.count2", "sweep.outputs"};
    return keys;
}

inline void reject_unknown_keys(const ConfigMap& cfg) {
    for (const auto& [key, value] : cfg) {
        bool known = false;
        for (const auto& k : known_setup_keys()) known = known || k == key;
        for (const auto& k : known_sweep_keys()) known = known || k == key;
        if (!known) throw ConfigError("unknown config key: " + key);
    }
}

inline MeasurementSetup setup_from_config(const ConfigMap& cfg) {
    reject_unknown_keys(cfg);
    if (cfg.count("channel.p") && cfg.count("channel.q_bar"))
        throw ConfigError("channel.p and channel.q_bar are mutually exclusive");
    try {
        const QubitState pre(cfg_number(cfg, "pre.theta", 0.0), cfg_number(cfg, "pre.phi", 0.0));
        const QubitState post(cfg_number(cfg, "post.theta", 0.0), cfg_number(cfg, "post.phi", 0.0));
        double p = cfg_number(cfg, "channel.p", 0.0);
        if (cfg.count("channel.q_bar")) p = p_from_bath(parse_number(cfg.at("channel.q_bar")));
        const GadChannel ch(cfg_number(cfg, "channel.gamma", 0.0), p);
        const PointerState pt(cfg_number(cfg, "pointer.sigma", 1.0),
                              cfg_number(cfg, "pointer.n_bar", 0.0),
                              cfg_number(cfg, "pointer.r", 0.0), cfg_number(cfg, "pointer.chi", 0.0),
                              cfg_number(cfg, "pointer.a", 0.0), cfg_number(cfg, "pointer.b", 0.0));
        return MeasurementSetup(pre, post, ch, pt, cfg_number(cfg, "s", 0.0));
    } catch (const InvalidParameter& e) {
        throw ConfigError(std::string("invalid setup value: ") + e.what());
    }
}

// 17 significant digits: doubles round-trip exactly through the CSV.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace psel

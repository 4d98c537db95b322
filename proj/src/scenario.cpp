// SPDX-License-Identifier: Apache-2.0

#include "isac/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace isac {

double ScenarioConfig::p0_watts() const { return dbm_to_watts(p0_dbm); }
double ScenarioConfig::sigma_n_sq() const { return dbm_to_watts(sigma_n_dbm); }
double ScenarioConfig::sigma_z_sq() const { return dbm_to_watts(sigma_z_dbm); }

double ScenarioConfig::rate_floor_omega() const {
    return rate_threshold_omega(rate_threshold_bps, sigma_n_sq());
}

void ScenarioConfig::validate() const {
    if (n_tx < 1) throw ConfigError("n_tx must be >= 1");
    if (n_rx < 1) throw ConfigError("n_rx must be >= 1");
    if (frame_len < 1) throw ConfigError("frame_len must be >= 1");
    if (!(spacing_tx > 0.0)) throw ConfigError("spacing_tx must be > 0");
    if (!(spacing_rx > 0.0)) throw ConfigError("spacing_rx must be > 0");
    if (!(beta >= 0.0)) throw ConfigError("beta must be >= 0");
    if (!(gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
    if (!(rate_threshold_bps >= 0.0)) throw ConfigError("rate_threshold_bps must be >= 0");
    if (std::abs(target_angle_deg) > 90.0)
        throw ConfigError("target_angle_deg must lie in [-90, 90]");
    if (std::abs(interferer_angle_deg) > 90.0)
        throw ConfigError("interferer_angle_deg must lie in [-90, 90]");
    if (!std::isfinite(p0_dbm) || !std::isfinite(sigma_n_dbm) || !std::isfinite(sigma_z_dbm))
        throw ConfigError("power levels must be finite");
}

CVector steering_vector(double angle_deg, int n, double spacing_wl) {
    const double theta = angle_deg * std::numbers::pi / 180.0;
    const double step = -2.0 * std::numbers::pi * spacing_wl * std::sin(theta);
    CVector a(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        a[static_cast<std::size_t>(k)] = std::polar(1.0, step * k);
    return a;
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double rate_threshold_omega(double rate_bps, double sigma_n_sq) {
    return (std::exp2(rate_bps) - 1.0) * sigma_n_sq;
}

CovModel make_cov_model(double angle_deg, double strength_amp, const ScenarioConfig& cfg) {
    cfg.validate();
    const CVector a = steering_vector(angle_deg, cfg.n_tx, cfg.spacing_tx);
    const CVector b = steering_vector(angle_deg, cfg.n_rx, cfg.spacing_rx);
    // vec(a b^H) column-major: column j of a b^H is conj(b_j) * a
    CovModel m;
    m.vec_p.resize(a.size() * b.size());
    for (std::size_t j = 0; j < b.size(); ++j)
        for (std::size_t i = 0; i < a.size(); ++i)
            m.vec_p[j * a.size() + i] = std::conj(b[j]) * a[i];
    m.strength = strength_amp * strength_amp;
    return m;
}

double GaussianSampler::uniform() {
    // 53 random bits into [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double GaussianSampler::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();    // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
}

cd GaussianSampler::cnormal() {
    const double scale = std::numbers::sqrt2 / 2.0;
    const double re = normal();
    const double im = normal();
    return cd(re * scale, im * scale);
}

CVector sample_rayleigh_channel(const ScenarioConfig& cfg, GaussianSampler& rng) {
    CVector h(static_cast<std::size_t>(cfg.n_tx));
    for (auto& z : h) z = rng.cnormal();
    return h;
}

Beamformer make_beamformer(CVector w, const CVector* h, double sigma_n_sq) {
    Beamformer bf;
    if (h != nullptr && h->size() == w.size()) {
        const cd hw = cdot(*h, w);
        const double m = std::abs(hw);
        if (m > 0.0) {
            const cd rot = std::conj(hw) / m;
            for (cd& z : w) z *= rot;
        }
        const double snr = m * m / sigma_n_sq;
        bf.achieved_rate = std::log2(1.0 + snr);
    }
    bf.power = norm_sq(w);
    bf.w = std::move(w);
    return bf;
}

// -- scenario files -----------------------------------------------------------

namespace {

const char* const kScenarioKeys[] = {
    "n_tx", "n_rx", "frame_len", "spacing_tx", "spacing_rx",
    "target_angle_deg", "interferer_angle_deg", "beta", "gamma",
    "p0_dbm", "sigma_n_dbm", "sigma_z_dbm", "rate_threshold_bps", "channel_seed",
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("scenario: bad numeric value for '" + key + "': " + value);
    }
    if (pos != value.size())
        throw ConfigError("scenario: trailing characters in value for '" + key + "'");
    return x;
}

int parse_int(const std::string& key, const std::string& value) {
    const double x = parse_double(key, value);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x)
        throw ConfigError("scenario: '" + key + "' must be an integer");
    return i;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw ConfigError("scenario: bad unsigned value for '" + key + "': " + value);
    }
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

ScenarioConfig parse_scenario(const std::string& text) {
    ScenarioConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("scenario: line " + std::to_string(lineno) + " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!seen.insert(key).second)
            throw ConfigError("scenario: duplicate key '" + key + "'");

        if (key == "n_tx") cfg.n_tx = parse_int(key, value);
        else if (key == "n_rx") cfg.n_rx = parse_int(key, value);
        else if (key == "frame_len") cfg.frame_len = parse_int(key, value);
        else if (key == "spacing_tx") cfg.spacing_tx = parse_double(key, value);
        else if (key == "spacing_rx") cfg.spacing_rx = parse_double(key, value);
        else if (key == "target_angle_deg") cfg.target_angle_deg = parse_double(key, value);
        else if (key == "interferer_angle_deg") cfg.interferer_angle_deg = parse_double(key, value);
        else if (key == "beta") cfg.beta = parse_double(key, value);
        else if (key == "gamma") cfg.gamma = parse_double(key, value);
        else if (key == "p0_dbm") cfg.p0_dbm = parse_double(key, value);
        else if (key == "sigma_n_dbm") cfg.sigma_n_dbm = parse_double(key, value);
        else if (key == "sigma_z_dbm") cfg.sigma_z_dbm = parse_double(key, value);
        else if (key == "rate_threshold_bps") cfg.rate_threshold_bps = parse_double(key, value);
        else if (key == "channel_seed") cfg.channel_seed = parse_u64(key, value);
        else throw ConfigError("scenario: unknown key '" + key + "'");
    }
    for (const char* k : kScenarioKeys)
        if (!seen.count(k)) throw ConfigError(std::string("scenario: missing key '") + k + "'");
    cfg.validate();
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("scenario: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string scenario_text(const ScenarioConfig& cfg) {
    std::ostringstream out;
    out << "n_tx = " << cfg.n_tx << "\n";
    out << "n_rx = " << cfg.n_rx << "\n";
    out << "frame_len = " << cfg.frame_len << "\n";
    out << "spacing_tx = " << format_double(cfg.spacing_tx) << "\n";
    out << "spacing_rx = " << format_double(cfg.spacing_rx) << "\n";
    out << "target_angle_deg = " << format_double(cfg.target_angle_deg) << "\n";
    out << "interferer_angle_deg = " << format_double(cfg.interferer_angle_deg) << "\n";
    out << "beta = " << format_double(cfg.beta) << "\n";
    out << "gamma = " << format_double(cfg.gamma) << "\n";
    out << "p0_dbm = " << format_double(cfg.p0_dbm) << "\n";
    out << "sigma_n_dbm = " << format_double(cfg.sigma_n_dbm) << "\n";
    out << "sigma_z_dbm = " << format_double(cfg.sigma_z_dbm) << "\n";
    out << "rate_threshold_bps = " << format_double(cfg.rate_threshold_bps) << "\n";
    out << "channel_seed = " << cfg.channel_seed << "\n";
    return out.str();
}

void save_scenario(const ScenarioConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("scenario: cannot write '" + path + "'");
    out << scenario_text(cfg);
}

std::uint64_t scenario_hash(const ScenarioConfig& cfg) {
    const std::string text = scenario_text(cfg);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace isac

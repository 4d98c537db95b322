// SPDX-License-Identifier: Apache-2.0
//
// scenario.hpp - problem-instance construction: configuration, ULA steering
// vectors, target-response covariance models and random channel generation.

#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "isac/numerics.hpp"

namespace isac {

/// Full problem instance. Angles are degrees at this boundary (radians
/// internally), powers are dBm in files and converted to linear watts on
/// access; antenna separations are measured in wavelengths.
struct ScenarioConfig {
    int n_tx = 6;                        // transmit antennas
    int n_rx = 6;                        // receive antennas
    int frame_len = 30;                  // communication frame length L
    double spacing_tx = 0.5;             // d1 / lambda
    double spacing_rx = 0.5;             // d2 / lambda
    double target_angle_deg = 0.0;
    double interferer_angle_deg = 30.0;
    double beta = 1.0;                   // radar echo amplitude, beta^2 is the strength
    double gamma = 100.0;                // interferer echo amplitude
    double p0_dbm = 40.0;                // max transmit power
    double sigma_n_dbm = 20.0;           // communication noise power
    double sigma_z_dbm = 30.0;           // radar noise power
    double rate_threshold_bps = 6.0;     // r in bits/s/Hz
    std::uint64_t channel_seed = 1;

    double p0_watts() const;
    double sigma_n_sq() const;
    double sigma_z_sq() const;
    /// Omega = (2^r - 1) sigma_n^2, the received-power equivalent of the rate
    /// constraint.
    double rate_floor_omega() const;

    /// Throws ConfigError if any invariant is violated.
    void validate() const;
};

/// Rank-one target-response covariance model: the implied covariance is
/// R = strength * vec_p vec_p^H with vec_p = vec(a b^H) stacked column-major.
struct CovModel {
    CVector vec_p;      // length n_tx * n_rx
    double strength;    // beta^2 or gamma^2
};

/// Complex transmit weight vector with power and rate metadata. The global
/// phase is normalized so h^H w is real >= 0 when a channel is attached.
struct Beamformer {
    CVector w;
    double power = 0.0;           // |w|^2, watts
    double achieved_rate = 0.0;   // bits/s/Hz (0 when no channel attached)
};

/// ULA steering vector: entry k = exp(-i 2 pi k d sin(theta)), k = 0..n-1.
CVector steering_vector(double angle_deg, int n, double spacing_wl);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// Omega = (2^r - 1) sigma_n^2.
double rate_threshold_omega(double rate_bps, double sigma_n_sq);

/// Builds vec(a(theta) b^H(theta)) and the squared strength for a point
/// scatterer at the given angle.
CovModel make_cov_model(double angle_deg, double strength_amp, const ScenarioConfig& cfg);

/// Deterministic seeded Gaussian sampler: mt19937_64 with an explicit
/// Box-Muller transform. Bit-reproducible across runs on the same platform.
class GaussianSampler {
  public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}
    /// standard normal N(0, 1)
    double normal();
    /// circular complex normal CN(0, 1): real/imag parts N(0, 1/2)
    cd cnormal();
    /// uniform in [0, 1)
    double uniform();

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// h ~ CN(0, I_{n_tx}); deterministic for a given sampler state.
CVector sample_rayleigh_channel(const ScenarioConfig& cfg, GaussianSampler& rng);

/// Construct a Beamformer from weights, normalizing the global phase against
/// the channel (h^H w real >= 0) and filling in power / achieved rate.
/// Pass h = nullptr when no channel is attached.
Beamformer make_beamformer(CVector w, const CVector* h, double sigma_n_sq);

// -- scenario files -----------------------------------------------------------
//
// Plain-text key/value document, one scenario per file:
//   key = value        one pair per line, '#' starts a comment
// Exactly the ScenarioConfig fields are accepted; unknown or duplicate keys
// and missing fields are rejected.

ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& text);
std::string scenario_text(const ScenarioConfig& cfg);
void save_scenario(const ScenarioConfig& cfg, const std::string& path);

/// FNV-1a hash of the canonical scenario text; used to stamp CSV outputs.
std::uint64_t scenario_hash(const ScenarioConfig& cfg);

} // namespace isac

// SPDX-License-Identifier: Apache-2.0
//
// solver_closed_form.hpp - closed-form optimal beamformer for the
// interference-free design problem
//
//   max |a^H w|^2   s.t.  |w|^2 <= P0,  |h^H w|^2 >= Omega.
//
// The optimum always uses full power and falls into one of three cases:
// radar MRT when the rate constraint is slack at MRT, channel MRT when the
// channel is parallel to the steering vector, and otherwise a blend of the
// two directions with the rate constraint active.

#pragma once

#include <utility>

#include "isac/scenario.hpp"

namespace isac {

enum class ClosedFormCase { mrt_radar, mrt_comm, blend, infeasible };

const char* to_string(ClosedFormCase c);

struct ClosedFormDiagnostics {
    ClosedFormCase case_taken = ClosedFormCase::infeasible;
    double t_load = 0.0;    // Omega / (P0 |h|^2), normalized rate load
    double corr = 0.0;      // |a^H h| / (|a| |h|)
    cd z1 = 0.0;            // blend coefficient on h/|h|
    double z2 = 0.0;        // blend coefficient on a/|a|
    double u2 = 0.0;        // sqrt((1 - t) / (1 - corr^2))
};

struct Feasibility {
    bool feasible = false;
    double t_load = 0.0;    // +inf sentinel when h == 0 with Omega > 0
};

/// Rate-demand feasibility: t = Omega / (P0 |h|^2) and feasible iff t <= 1
/// (Cauchy-Schwarz makes t > 1 unreachable within the power budget).
Feasibility feasibility(const CVector& h, const ScenarioConfig& cfg);

/// The three-case closed form. The returned beamformer satisfies
/// |w|^2 == P0 (full power) and the rate constraint; in the blend case the
/// rate constraint is active. Throws InfeasibleError (carrying t) when the
/// demand is infeasible.
std::pair<Beamformer, ClosedFormDiagnostics>
solve_no_interference(const CVector& h, const ScenarioConfig& cfg);

} // namespace isac

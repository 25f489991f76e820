#pragma once

/**
 * @file report.hpp
 * @brief Serialization of certificates, kernels and orbits.
 *
 * Human-readable reports are rendered from the same JSON document that is
 * written as the machine-readable sidecar, so the two never disagree.
 */

#include <string>

#include <json.hpp>

#include "posorbit/hypotheses.hpp"
#include "posorbit/solver.hpp"

namespace posorbit {

/// %.17g
std::string fmt17(double v);

nlohmann::ordered_json certificate_json(const ProblemSpec& spec, const Certificate& cert);

/// Indented "key: value" rendering of a JSON document.
std::string render_text(const nlohmann::ordered_json& doc);

nlohmann::ordered_json green_constants_json(const GreensFunction& green);

/// "key=value" lines for a flat JSON object, floats at 17 digits.
std::string key_value_block(const nlohmann::ordered_json& flat);

/// Header `t,s,G,Gt`, then (n+1)^2 rows with t outer and s inner.
std::string greens_csv(const GreensFunction& green);

nlohmann::ordered_json orbit_json(const ProblemSpec& spec, const Orbit& orbit);

/// `# key=value` metadata lines followed by `t,x,v` rows.
std::string trajectory_csv(const ProblemSpec& spec, const Orbit& orbit);

/// Standalone SVG of the phase portrait (x horizontal, v vertical).
std::string svg_phase(const Trajectory& traj, const std::string& title);

/// Standalone SVG with x(t) and v(t) in two stacked panels.
std::string svg_series(const Trajectory& traj, const std::string& title);

}  // namespace posorbit

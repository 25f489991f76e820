#include "posorbit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "posorbit/problem_file.hpp"
#include "posorbit/transform.hpp"

namespace posorbit {

using json = nlohmann::ordered_json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

json bounds_json(const RBounds& r) {
  return json{{"lo", r.lo}, {"hi", r.hi}, {"lo_strict", r.lo_strict}, {"ok", r.ok}};
}

json constants_json(const Constants& k) {
  return json{{"G_max", k.g_max}, {"G_min", k.g_min}, {"D_max", k.d_max}, {"sigma", k.sigma},
              {"delta", k.delta}, {"b_min", k.b_min}, {"b_max", k.b_max}, {"c_min", k.c_min},
              {"c_max", k.c_max}, {"e_min", k.e_min}, {"e_max", k.e_max}, {"b_plus_mean", k.b_plus_mean}};
}

json evaluation_json(const Evaluation& ev) {
  json j{{"label", ev.label}, {"constants", constants_json(ev.constants)}};
  if (ev.h1) j["H1"] = bounds_json(*ev.h1);
  j["H2"] = json{{"value", ev.h2.value}, {"ok", ev.h2.ok}};
  if (ev.h3) j["H3"] = bounds_json(*ev.h3);
  if (ev.h4) j["H4"] = bounds_json(*ev.h4);
  j["r_interval"] = ev.r_interval ? bounds_json(*ev.r_interval) : json(nullptr);
  j["R_witness"] = ev.R_witness ? json(*ev.R_witness) : json(nullptr);
  j["R_exceeds_r_hi"] = ev.R_exceeds_r_hi;
  j["verdict"] = ev.verdict;
  j["reason"] = ev.reason;
  return j;
}

json criterion_json(const CriterionVerdict& v) {
  json q = json::object();
  for (const auto& [key, value] : v.quantities) q[key] = value;
  return json{{"criterion", to_string(v.criterion)},
              {"applicable", v.applicable},
              {"holds", v.holds},
              {"quantities", q},
              {"notes", v.notes}};
}

std::string scalar_text(const json& v) {
  if (v.is_null()) return "none";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v.get<double>());
    return buf;
  }
  return v.dump();
}

void render(const json& v, int depth, std::ostringstream& out) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  if (v.is_object()) {
    for (const auto& [key, item] : v.items()) {
      if (item.is_structured() && !item.empty()) {
        out << pad << key << ":\n";
        render(item, depth + 1, out);
      } else {
        out << pad << key << ": " << (item.is_structured() ? std::string("-") : scalar_text(item)) << "\n";
      }
    }
  } else if (v.is_array()) {
    for (const auto& item : v) {
      if (item.is_structured()) {
        out << pad << "-\n";
        render(item, depth + 1, out);
      } else {
        out << pad << "- " << scalar_text(item) << "\n";
      }
    }
  } else {
    out << pad << scalar_text(v) << "\n";
  }
}

}  // namespace

json certificate_json(const ProblemSpec& spec, const Certificate& cert) {
  json j;
  j["problem"] = json{{"name", spec.name},
                      {"spec_hash", hex(spec_hash(spec))},
                      {"omega", spec.omega},
                      {"rho1", spec.rho1},
                      {"rho2", spec.rho2},
                      {"alpha", cert.alpha},
                      {"singularity_class", to_string(singularity_class(spec))}};
  j["theorem"] = to_string(cert.theorem);
  j["verdict"] = cert.verdict;
  j["reason"] = cert.reason;
  j["green"] = json{{"origin", cert.green_origin},
                    {"positive", cert.green_positive},
                    {"positivity_source", to_string(cert.positivity_source)}};
  json criteria = json::array();
  for (const auto& c : cert.criteria) criteria.push_back(criterion_json(c));
  j["criteria"] = criteria;
  json evals = json::array();
  if (!cert.primary.label.empty()) evals.push_back(evaluation_json(cert.primary));
  if (cert.reported) evals.push_back(evaluation_json(*cert.reported));
  j["evaluations"] = evals;
  return j;
}

std::string render_text(const json& doc) {
  std::ostringstream out;
  render(doc, 0, out);
  return out.str();
}

json green_constants_json(const GreensFunction& g) {
  json j{{"origin", g.origin == GreensFunction::Origin::ClosedForm ? "closed-form" : "numeric"},
         {"n", g.n},
         {"omega", g.omega}};
  j["xi"] = g.xi ? json(*g.xi) : json(nullptr);
  j["G_max"] = g.g_max;
  j["G_min"] = g.g_min;
  j["D_max"] = g.d_max;
  j["sigma"] = g.sigma;
  j["delta"] = g.delta;
  j["positive"] = g.positive;
  return j;
}

std::string key_value_block(const json& flat) {
  std::string out;
  for (const auto& [key, v] : flat.items()) {
    out += key + "=";
    if (v.is_number_float()) {
      out += fmt17(v.get<double>());
    } else {
      out += scalar_text(v);
    }
    out += "\n";
  }
  return out;
}

std::string greens_csv(const GreensFunction& g) {
  std::string out = "t,s,G,Gt\n";
  out.reserve(out.size() + static_cast<std::size_t>(g.n + 1) * (g.n + 1) * 80);
  for (int i = 0; i <= g.n; ++i) {
    const std::string t = fmt17(g.node(i));
    for (int j = 0; j <= g.n; ++j) {
      out += t;
      out += ',';
      out += fmt17(g.node(j));
      out += ',';
      out += fmt17(g.g(i, j));
      out += ',';
      out += fmt17(g.gt(i, j));
      out += '\n';
    }
  }
  return out;
}

json orbit_json(const ProblemSpec& spec, const Orbit& o) {
  return json{{"name", spec.name},
              {"spec_hash", hex(spec_hash(spec))},
              {"omega", o.omega},
              {"rho1", spec.rho1},
              {"rho2", spec.rho2},
              {"alpha", alpha_of(spec.rho1)},
              {"x0", o.initial.x},
              {"v0", o.initial.v},
              {"periodicity_residual", o.periodicity_residual},
              {"ode_residual", o.ode_residual},
              {"ode_residual_transformed", o.ode_residual_transformed},
              {"min_x", o.min_x},
              {"norm_y", o.norm_y},
              {"newton_steps", o.newton_steps},
              {"start_x", o.start_x},
              {"samples", static_cast<long long>(o.samples.size())}};
}

std::string trajectory_csv(const ProblemSpec& spec, const Orbit& o) {
  std::string out;
  const json meta = orbit_json(spec, o);
  for (const auto& [key, v] : meta.items()) {
    out += "# " + key + "=" + (v.is_number_float() ? fmt17(v.get<double>()) : scalar_text(v)) + "\n";
  }
  out += "t,x,v\n";
  for (std::size_t i = 0; i < o.samples.size(); ++i) {
    out += fmt17(o.samples.t[i]) + "," + fmt17(o.samples.x[i]) + "," + fmt17(o.samples.v[i]) + "\n";
  }
  return out;
}

namespace {

struct Axis {
  double lo, hi;
  std::vector<double> ticks;
};

Axis nice_axis(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(std::abs(lo) * 1e-3, 1e-9);
    lo -= pad;
    hi += pad;
  }
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  Axis a{std::floor(lo / step) * step, std::ceil(hi / step) * step, {}};
  for (double v = a.lo; v <= a.hi + 0.5 * step; v += step) a.ticks.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return a;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// One framed panel with ticks, labels and a polyline.
void panel(std::ostringstream& svg, double x0, double y0, double w, double h, const std::vector<double>& xs,
           const std::vector<double>& ys, const std::string& xlabel, const std::string& ylabel,
           const std::string& colour) {
  const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
  const Axis ax = nice_axis(*xmin, *xmax);
  const Axis ay = nice_axis(*ymin, *ymax);
  auto px = [&](double v) { return x0 + (v - ax.lo) / (ax.hi - ax.lo) * w; };
  auto py = [&](double v) { return y0 + h - (v - ay.lo) / (ay.hi - ay.lo) * h; };

  svg << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(w) << "\" height=\"" << num(h)
      << "\" fill=\"none\" stroke=\"#000\"/>\n";
  for (double t : ax.ticks) {
    svg << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(y0 + h) << "\" x2=\"" << num(px(t)) << "\" y2=\""
        << num(y0 + h + 5) << "\" stroke=\"#000\"/>\n";
    svg << "<text x=\"" << num(px(t)) << "\" y=\"" << num(y0 + h + 18)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << label(t) << "</text>\n";
  }
  for (double t : ay.ticks) {
    svg << "<line x1=\"" << num(x0 - 5) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(x0) << "\" y2=\""
        << num(py(t)) << "\" stroke=\"#000\"/>\n";
    svg << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(py(t) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << label(t) << "</text>\n";
  }
  svg << "<text x=\"" << num(x0 + w / 2) << "\" y=\"" << num(y0 + h + 36)
      << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  svg << "<text x=\"" << num(x0 - 70) << "\" y=\"" << num(y0 + h / 2) << "\" font-size=\"13\" text-anchor=\"middle\""
      << " transform=\"rotate(-90 " << num(x0 - 70) << " " << num(y0 + h / 2) << ")\">" << ylabel << "</text>\n";
  svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) svg << (i ? " " : "") << num(px(xs[i])) << "," << num(py(ys[i]));
  svg << "\"/>\n";
}

std::string open_svg(double w, double h, const std::string& title) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
    << " " << h << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  s << "<text x=\"" << w / 2 << "\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">" << title << "</text>\n";
  return s.str();
}

}  // namespace

std::string svg_phase(const Trajectory& traj, const std::string& title) {
  std::ostringstream svg;
  svg << open_svg(640, 520, title);
  panel(svg, 110, 50, 500, 400, traj.x, traj.v, "x", "x'", "#1f5fbf");
  svg << "</svg>\n";
  return svg.str();
}

std::string svg_series(const Trajectory& traj, const std::string& title) {
  std::ostringstream svg;
  svg << open_svg(640, 720, title);
  panel(svg, 110, 50, 500, 260, traj.t, traj.x, "t", "x", "#1f5fbf");
  panel(svg, 110, 400, 500, 260, traj.t, traj.v, "t", "x'", "#bf3f1f");
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace posorbit

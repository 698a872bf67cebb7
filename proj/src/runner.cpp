#include "ratchet/runner.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "ratchet/closed_form.hpp"
#include "ratchet/multistate.hpp"
#include "ratchet/sweep.hpp"
#include "ratchet/util.hpp"

namespace ratchet {
namespace {

using nlohmann::ordered_json;

std::string sign_name(SignPrediction s) {
  switch (s) {
    case SignPrediction::Negative: return "negative";
    case SignPrediction::Positive: return "positive";
    default: return "zero";
  }
}

std::string sign_name(MsSign s) {
  switch (s) {
    case MsSign::Negative: return "negative";
    case MsSign::Positive: return "positive";
    default: return "undetermined";
  }
}

std::string sign_name(TransportSign s) {
  switch (s) {
    case TransportSign::Negative: return "negative";
    case TransportSign::Positive: return "positive";
    default: return "zero_or_undetermined";
  }
}

}  // namespace

ordered_json run_coeffs(const std::string& potential_spec, double omega, double sigma) {
  const PotentialPtr psi = parse_potential(potential_spec);
  const ClosedFormCoeffs c = compute_coeffs(omega, psi, sigma);
  ordered_json j;
  j["omega"] = omega;
  j["sigma"] = sigma;
  j["alpha"] = c.alpha;
  j["beta_plus"] = c.beta_plus;
  j["beta_minus"] = c.beta_minus;
  j["beta"] = c.beta;
  j["A"] = c.A;
  j["B"] = c.B;
  j["v_tilted"] = -sigma * c.A;
  j["v_adiabatic"] = adiabatic_velocity(omega, psi, sigma);
  j["v_semiadiabatic"] = semiadiabatic_velocity(omega, psi, sigma);
  if (omega != 0.0)
    j["J"] = j_functional(omega, psi, sigma);
  else
    j["J"] = nullptr;
  return j;
}

ordered_json run_velocity(const std::string& potential_spec, double omega, double sigma,
                          const SolverConfig& cfg, double period) {
  const PotentialPtr psi = parse_potential(potential_spec);
  const ForceProtocol p = tilt_to_force(constant_tilt(psi, omega, period));
  const PeriodicOrbit orbit = find_periodic_solution(p, sigma, cfg);
  const double v = average_velocity(orbit);
  const double v_cf = tilted_velocity(omega, psi, sigma);
  ordered_json j;
  j["v_measured"] = v;
  j["v_closed_form"] = v_cf;
  j["abs_error"] = std::abs(v - v_cf);
  j["iterations"] = orbit.iterations;
  j["closure_residual"] = orbit.closure_residual;
  return j;
}

ordered_json run_stokes(const std::string& potential_spec, double omega,
                        const SolverConfig& cfg) {
  const PotentialPtr psi = parse_potential(potential_spec);
  const StokesReport rep = stokes_drift_check(psi, omega, cfg);
  ordered_json j;
  j["v_measured"] = rep.v_measured;
  j["v_limit"] = rep.v_limit;
  j["abs_error"] = std::abs(rep.v_measured - rep.v_limit);
  j["max_orbit_l1_dev"] = rep.max_orbit_l1_dev;
  j["iterations"] = rep.iterations;
  j["closure_residual"] = rep.closure_residual;
  return j;
}

ordered_json run_rotation(const ForceProtocol& protocol, const RotationConfig& cfg) {
  const RotationReport rep = poincare_displacement_scan(protocol, cfg);
  ordered_json j;
  j["classification"] = sign_name(rep.classification);
  j["rotation_estimate"] = rep.rotation_estimate;
  j["min_displacement"] = rep.min_displacement;
  j["max_displacement"] = rep.max_displacement;
  j["displacements"] = rep.displacements;
  return j;
}

ordered_json run_multistate(const MultiStateSystem& sys, const SolverConfig& cfg) {
  const MultiStateDensity d = ms_stationary(sys, cfg);
  ordered_json j;
  j["v_measured"] = ms_velocity(d, sys);
  j["residual"] = ms_stationary_residual(d, sys);
  if (sys.num_states == 2) {
    try {
      const ClassifyResult cls = classify_sign(sys.forces[0], sys.forces[1],
                                               sys.rates[0][1], sys.rates[1][0]);
      j["classification"] = sign_name(cls.sign);
      j["case"] = cls.case_tag == 1 ? "I" : (cls.case_tag == 2 ? "II" : "III");
      if (cls.case_tag == 3) {
        const ZeroDiffusionSolution zd = zero_diffusion_case3(
            sys.forces[0], sys.forces[1], sys.rates[0][1], sys.rates[1][0]);
        j["v_zero_diffusion"] = zd.v;
      }
    } catch (const std::invalid_argument& ex) {
      j["classification"] = std::string("error: ") + ex.what();
    }
  } else {
    j["classification"] = "n/a";
  }
  return j;
}

namespace {

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

std::string json_to_cell(const ordered_json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

const std::vector<std::string>& sweep_columns(const std::string& command) {
  static const std::map<std::string, std::vector<std::string>> cols{
      {"coeffs",
       {"alpha", "beta_plus", "beta_minus", "beta", "A", "B", "v_tilted", "v_adiabatic",
        "v_semiadiabatic", "J"}},
      {"velocity",
       {"v_measured", "v_closed_form", "abs_error", "iterations", "closure_residual"}},
      {"stokes",
       {"v_measured", "v_limit", "abs_error", "max_orbit_l1_dev", "iterations",
        "closure_residual"}},
  };
  auto it = cols.find(command);
  if (it == cols.end())
    throw config_error("sweep target must be one of coeffs, velocity, stokes", 0, 0);
  return it->second;
}

}  // namespace

std::string run_sweep(const ConfigNode& cfg, int workers) {
  const std::string command = cfg.get_string("command");
  const std::vector<std::string>& out_cols = sweep_columns(command);

  const ConfigNode* grid = cfg.table("grid");
  std::vector<SweepAxis> axes;
  if (grid) {
    for (const ConfigEntry& e : grid->entries) {
      SweepAxis axis;
      axis.key = e.key;
      std::istringstream in(e.raw);
      std::string tok;
      while (in >> tok) axis.values.push_back(tok);
      if (axis.values.empty())
        throw config_error("empty grid axis '" + e.key + "'", e.line, e.column);
      axes.push_back(std::move(axis));
    }
  }
  long long total = 1;
  for (const auto& a : axes) total *= static_cast<long long>(a.values.size());
  if (total > 1000000) throw config_error("sweep grid too large", 0, 0);

  // point parameters = base entries overridden by the axis values
  auto point_params = [&](long long idx) {
    std::map<std::string, std::string> kv;
    for (const ConfigEntry& e : cfg.entries) kv[e.key] = e.raw;
    long long rest = idx;
    for (std::size_t a = axes.size(); a-- > 0;) {
      const auto& axis = axes[a];
      kv[axis.key] = axis.values[static_cast<std::size_t>(
          rest % static_cast<long long>(axis.values.size()))];
      rest /= static_cast<long long>(axis.values.size());
    }
    return kv;
  };

  auto get = [](const std::map<std::string, std::string>& kv, const std::string& k,
                const std::string& dflt) {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : it->second;
  };

  std::vector<std::string> rows(static_cast<std::size_t>(total));
  parallel_for(static_cast<int>(total), workers, [&](int idx) {
    const auto kv = point_params(idx);
    std::ostringstream row;
    long long rest = idx;
    std::vector<std::string> axis_cells(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
      axis_cells[a] = axes[a].values[static_cast<std::size_t>(
          rest % static_cast<long long>(axes[a].values.size()))];
      rest /= static_cast<long long>(axes[a].values.size());
    }
    for (const std::string& c : axis_cells) row << c << ',';
    try {
      const std::string pot = get(kv, "potential", "zero");
      const double omega = std::stod(get(kv, "omega", "1"));
      const double sigma = std::stod(get(kv, "sigma", "1"));
      SolverConfig scfg;
      scfg.n = static_cast<int>(std::stod(get(kv, "grid-n", "256")));
      scfg.dt = std::stod(get(kv, "dt", "0.001"));
      scfg.tolerance = std::stod(get(kv, "tol", "1e-8"));
      scfg.theta = std::stod(get(kv, "theta", "1"));
      ordered_json out;
      if (command == "coeffs") {
        out = run_coeffs(pot, omega, sigma);
      } else if (command == "velocity") {
        out = run_velocity(pot, omega, sigma, scfg,
                           std::stod(get(kv, "period", "1")));
      } else {
        out = run_stokes(pot, omega, scfg);
      }
      bool first = true;
      for (const std::string& col : out_cols) {
        if (!first) row << ',';
        first = false;
        row << (out.contains(col) ? json_to_cell(out[col]) : "");
      }
      row << ",ok";
    } catch (const std::exception& ex) {
      for (std::size_t c = 0; c < out_cols.size(); ++c) row << ',';
      std::string msg = ex.what();
      for (char& ch : msg)
        if (ch == ',' || ch == '\n') ch = ';';
      row << "error: " << msg;
    }
    rows[static_cast<std::size_t>(idx)] = row.str();
  });

  std::ostringstream csv;
  for (const auto& a : axes) csv << a.key << ',';
  bool first = true;
  for (const std::string& col : out_cols) {
    if (!first) csv << ',';
    first = false;
    csv << col;
  }
  csv << ",status\n";
  for (const std::string& r : rows) csv << r << '\n';
  return csv.str();
}

}  // namespace ratchet

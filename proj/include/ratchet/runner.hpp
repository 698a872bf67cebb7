#ifndef RATCHET_RUNNER_HPP
#define RATCHET_RUNNER_HPP

#include <string>

#include "json.hpp"
#include "ratchet/config.hpp"
#include "ratchet/rotation.hpp"
#include "ratchet/solver.hpp"

namespace ratchet {

// Subcommand cores shared by the CLI and the sweep driver.

nlohmann::ordered_json run_coeffs(const std::string& potential_spec, double omega,
                                  double sigma);

/// Constant tilted protocol: periodic orbit vs the closed form -sigma A.
nlohmann::ordered_json run_velocity(const std::string& potential_spec, double omega,
                                    double sigma, const SolverConfig& cfg,
                                    double period = 1.0);

nlohmann::ordered_json run_stokes(const std::string& potential_spec, double omega,
                                  const SolverConfig& cfg);

nlohmann::ordered_json run_rotation(const ForceProtocol& protocol,
                                    const RotationConfig& cfg);

nlohmann::ordered_json run_multistate(const MultiStateSystem& sys,
                                      const SolverConfig& cfg);

/// Sweep over the cartesian grid declared in cfg ([grid] table); rows come out
/// in grid enumeration order regardless of the worker count.
std::string run_sweep(const ConfigNode& cfg, int workers);

}  // namespace ratchet

#endif

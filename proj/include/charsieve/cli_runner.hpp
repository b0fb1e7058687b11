#pragma once

#include <ostream>
#include <string>

#include "charsieve/config.hpp"

namespace charsieve {

// Exit-code contract shared by every command:
//   0 = all checks passed, 1 = a mathematical residual exceeded its
//   tolerance, 2 = configuration or domain error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitResidual = 1;
inline constexpr int kExitConfig = 2;

int run_identities(const ExperimentConfig& cfg, std::ostream& log);
int run_asymptotics(const ExperimentConfig& cfg, std::ostream& log);
int run_sieve(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace charsieve

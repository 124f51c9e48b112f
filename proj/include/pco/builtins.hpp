#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pco/prf.hpp"

namespace pco {

/// Theta-neuron response plus phi (1-phi)^2 eps^2. Same infinitesimal
/// response as the theta neuron, but strongly repelling synchrony.
PhaseResponse example1_prf();

/// phi (1-phi) eps - 2 phi (phi-1)^2 (2 phi - 1) eps^2.
PhaseResponse example2_prf();

/// g = 0.
PhaseResponse zero_prf();

/// Resolves theta, theta-tilde, example1, example2, zero.
/// Throws InvalidParameter for anything else.
PhaseResponse builtin_prf(std::string_view name);

const std::vector<std::string>& builtin_names();

}  // namespace pco

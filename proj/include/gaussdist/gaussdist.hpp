#pragma once

// Umbrella header for the gaussdist library.

#include "gaussdist/errors.hpp"
#include "gaussdist/gaussian_state.hpp"
#include "gaussdist/fidelity.hpp"
#include "gaussdist/optimum.hpp"
#include "gaussdist/multimode.hpp"
#include "gaussdist/fock.hpp"
#include "gaussdist/verify.hpp"

namespace gaussdist {

inline constexpr const char* version = "0.1.0";

}  // namespace gaussdist

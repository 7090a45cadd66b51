#ifndef GMI_GMI_HPP
#define GMI_GMI_HPP

// Umbrella header for the whole library.

#include "core.hpp"        // matrices, states, probabilities
#include "scatterers.hpp"  // beam-splitter, coins, network composition
#include "resonator.hpp"   // the interferometer: closed form, round trips, modes
#include "imperfections.hpp" // measured data, renormalization, calibration
#include "metrics.hpp"     // sweeps, visibility, slope, enhancement reports
#include "verify.hpp"      // machine-checked invariant suite

#endif // GMI_GMI_HPP

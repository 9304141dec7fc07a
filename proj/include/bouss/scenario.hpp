#pragma once

#include "bouss/amr/amr.hpp"
#include "bouss/radial/radial.hpp"

namespace bouss {

/// Bottom elevation from the `bathymetry` key: flat (bathy_depth), radial_shelf
/// (centered at ic_x, ic_y) or file (bathy_file, ASCII grid).
BathymetryField scenario_bathymetry(const SimConfig& cfg);

/// Initial condition from the `initial` key:
///   gaussian      eta = sea + ic_amplitude * exp(-(d / ic_width)^2), at rest
///   sine          eta = sea + ic_amplitude * sin(ic_wavenumber * x), right-going linear wave
///   lake_at_rest  eta = sea, at rest
amr::InitialCondition scenario_initial(const SimConfig& cfg, const BathymetryField& bathymetry);

/// Radial reduction along +x from (ic_x, ic_y): uniform spacing radial_dr on
/// flat bottoms, otherwise graded by sqrt(depth) down to radial_dr_min.
radial::RadialState scenario_radial_state(const SimConfig& cfg);

}  // namespace bouss

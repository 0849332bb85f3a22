#pragma once

namespace phonoscat::constants {

// CODATA 2018.
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double epsilon0 = 8.8541878128e-12;  // F/m

}  // namespace phonoscat::constants

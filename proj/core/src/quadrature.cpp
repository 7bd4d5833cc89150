#include "weierlab/quadrature.hpp"

// Header-only templates; this translation unit keeps the header compiled
// standalone as part of the library build.

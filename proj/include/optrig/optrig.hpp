#pragma once

// Numerical core. The JSON layer (io.hpp, settings.hpp, validate.hpp) also
// needs nlohmann/json on the include path and is not pulled in here.

#include "optrig/angle.hpp"
#include "optrig/continuation.hpp"
#include "optrig/decomposition.hpp"
#include "optrig/errors.hpp"
#include "optrig/iteration.hpp"
#include "optrig/linalg.hpp"
#include "optrig/pencil.hpp"
#include "optrig/space.hpp"

#pragma once

#include "stlmine/boundary.hpp"
#include "stlmine/csv_io.hpp"
#include "stlmine/datagen.hpp"
#include "stlmine/enumerator.hpp"
#include "stlmine/formula.hpp"
#include "stlmine/learner.hpp"
#include "stlmine/monitor.hpp"
#include "stlmine/param_space.hpp"
#include "stlmine/parser.hpp"
#include "stlmine/signature.hpp"
#include "stlmine/trace.hpp"

namespace stlmine {
inline constexpr const char* kVersion = "0.1.0";
}

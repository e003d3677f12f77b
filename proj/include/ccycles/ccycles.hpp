// Umbrella header.
#pragma once

#include "ccycles/closed_forms.hpp"
#include "ccycles/continuation.hpp"
#include "ccycles/core.hpp"
#include "ccycles/geometry.hpp"
#include "ccycles/morse.hpp"
#include "ccycles/roots.hpp"
#include "ccycles/serialization.hpp"
#include "ccycles/solver.hpp"
#include "ccycles/verify.hpp"

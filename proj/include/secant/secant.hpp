#pragma once

// Umbrella header.  json_io.hpp needs the vendored json.hpp on the include path.

#include "classify.hpp"
#include "decompose.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "json_io.hpp"
#include "lie.hpp"
#include "matrix.hpp"
#include "secantdim.hpp"

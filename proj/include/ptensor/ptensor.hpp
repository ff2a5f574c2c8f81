#pragma once

/// Umbrella header: the whole toolkit is header-only; include this and link
/// nothing.

#include "alpha.hpp"       // IWYU pragma: export
#include "bounds.hpp"      // IWYU pragma: export
#include "classify.hpp"    // IWYU pragma: export
#include "eigenpairs.hpp"  // IWYU pragma: export
#include "generate.hpp"    // IWYU pragma: export
#include "json_io.hpp"     // IWYU pragma: export
#include "spectral.hpp"    // IWYU pragma: export
#include "tcp.hpp"         // IWYU pragma: export
#include "tensor.hpp"      // IWYU pragma: export

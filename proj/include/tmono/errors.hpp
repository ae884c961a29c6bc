// errors.hpp — Exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace tmono {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// algebra
struct NonHermitianInput : Error { using Error::Error; };

// models
struct CutoffTooSmall : Error { using Error::Error; };
struct OutsideTopologicalRegion : Error { using Error::Error; };

// geometry
struct NotChiral : Error { using Error::Error; };
struct DegenerateGroundState : Error { using Error::Error; };
struct DegeneracyTooClose : Error { using Error::Error; };
struct BranchJump : Error { using Error::Error; };
struct ImaginaryResidue : Error { using Error::Error; };
struct SingularPoint : Error { using Error::Error; };

// topology
struct NotChiralRegime : Error { using Error::Error; };
struct DegeneracyOnSurface : Error { using Error::Error; };
struct NotConverged : Error { using Error::Error; };

} // namespace tmono

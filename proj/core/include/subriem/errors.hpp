#pragma once

#include <stdexcept>
#include <string>

namespace subriem {

// Malformed input files or definitions.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// TM + D fails to span the tangent space of the group, or TM is contained in D.
class TransversalityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Adapted frames at neighbouring stencil points disagree in orientation.
class OrientationFlipError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Zero horizontal gradient of a defining function.
class CharacteristicPointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parametrization with zero measure density.
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace subriem

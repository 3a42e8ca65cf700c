#pragma once

#include <stdexcept>
#include <string>

namespace qjm {

// Base classes map onto CLI exit codes: bad input -> 2, numerical trouble -> 3.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonSquare : InputError { using InputError::InputError; };
struct DimensionMismatch : InputError { using InputError::InputError; };
struct RangeError : InputError { using InputError::InputError; };
struct UnknownName : InputError { using InputError::InputError; };
struct UnknownClass : InputError { using InputError::InputError; };
struct EmptyOutcomeList : InputError { using InputError::InputError; };
struct TooManyOutcomes : InputError { using InputError::InputError; };
struct TooManyStrategies : InputError { using InputError::InputError; };
struct TooManyCopies : InputError { using InputError::InputError; };
struct ShapeMismatch : InputError { using InputError::InputError; };
struct SchemaError : InputError { using InputError::InputError; };
struct InvalidState : InputError { using InputError::InputError; };
struct BiasedMeasurement : InputError { using InputError::InputError; };
struct NonMaximallyMixedMarginal : InputError { using InputError::InputError; };
struct MarginalNotMaximallyMixed : InputError { using InputError::InputError; };

struct NumericalFailure : NumericalError { using NumericalError::NumericalError; };
struct NonConvergence : NumericalError { using NumericalError::NumericalError; };

// Negative physics verdict surfaced as an error (e.g. asking for a parent POVM
// of an incompatible set). CLI maps this to exit code 1, not 2/3.
struct NotJointlyMeasurable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qjm

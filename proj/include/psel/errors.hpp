#pragma once

#include <stdexcept>
#include <string>

namespace psel {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A constructor argument is outside its documented domain.
struct InvalidParameter : Error {
    using Error::Error;
};

// A density matrix fails Hermiticity / trace / positivity checks.
struct InvalidState : Error {
    using Error::Error;
};

// A Kraus list fails the completeness sum.
struct InvalidKraus : Error {
    using Error::Error;
};

// Pre- and post-selection too close to orthogonal for a weak-value quotient.
struct OrthogonalSelection : Error {
    using Error::Error;
};

// Post-selection probability below the division threshold.
struct ZeroPostSelection : Error {
    using Error::Error;
};

// A truncated-space operator failed its interior-block unitarity gate.
struct CutoffTooSmall : Error {
    using Error::Error;
};

// The cutoff-doubling loop hit the ceiling before scalars settled.
struct NoConvergence : Error {
    using Error::Error;
};

// Neither candidate convention fits the oracle within tolerance.
struct CalibrationAmbiguous : Error {
    using Error::Error;
};

// Malformed configuration input (CLI layer; maps to exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

} // namespace psel

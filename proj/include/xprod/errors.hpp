#ifndef XPROD_ERRORS_HPP
#define XPROD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace xprod {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotPartialIsometry : Error { using Error::Error; };
struct NotProjection : Error { using Error::Error; };
struct NotAnInteraction : Error { using Error::Error; };
struct NotInvariant : Error { using Error::Error; };
struct NotUnimodular : Error { using Error::Error; };
struct AlgebraMismatch : Error { using Error::Error; };
struct WindowTooSmall : Error { using Error::Error; };
struct HypothesisFailed : Error { using Error::Error; };
struct SingularRestriction : Error { using Error::Error; };
struct AmbiguousBlock : Error { using Error::Error; };
struct FormError : Error { using Error::Error; };
struct InvalidCocycle : Error { using Error::Error; };
struct MalformedInput : Error { using Error::Error; };

} // namespace xprod

#endif

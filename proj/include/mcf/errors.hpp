#pragma once

#include <stdexcept>
#include <string>

namespace mcf {

struct Error : std::runtime_error {
    Error(std::string type, const std::string& what)
        : std::runtime_error(what), type(std::move(type)) {}
    std::string type;
};

#define MCF_ERROR_TYPE(Name)                                        \
    struct Name : Error {                                           \
        explicit Name(const std::string& what) : Error(#Name, what) {} \
    }

MCF_ERROR_TYPE(ZeroLastCoordinate);
MCF_ERROR_TYPE(ZeroFirstCoordinate);
MCF_ERROR_TYPE(NotInCone);
MCF_ERROR_TYPE(NotInSimplex);
MCF_ERROR_TYPE(ZeroVector);
MCF_ERROR_TYPE(IncompleteBlock);
MCF_ERROR_TYPE(SingularCell);
MCF_ERROR_TYPE(PreconditionViolated);
MCF_ERROR_TYPE(PoleHit);
MCF_ERROR_TYPE(BoundaryPoint);
MCF_ERROR_TYPE(NonConvergent);
MCF_ERROR_TYPE(OrbitTerminated);
MCF_ERROR_TYPE(NoJumpFound);
MCF_ERROR_TYPE(NonContractingPeriod);
MCF_ERROR_TYPE(ParseError);

#undef MCF_ERROR_TYPE

} // namespace mcf

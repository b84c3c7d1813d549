#pragma once

#include <stdexcept>
#include <string>

namespace qmc {

enum class Errc {
    Parse,
    IndeterminateForm,
    EmptyInterval,
    ZeroScale,
    Arity,
    UnknownLocation,
    TimeOutOfInterval,
    NotAllowed,
    NotEnumerable,
    NotInitialised,
    OpenFormula,
    UnboundFixVar,
    NegativeFixVar,
    ZeroRateDivision,
    NotFlat,
    NonIntegerData,
    NotCounterReset,
    CounterOutOfRange,
    PreconditionViolated,
    NotEquivalent,
    PlayNotTerminated,
    Limit,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

}  // namespace qmc

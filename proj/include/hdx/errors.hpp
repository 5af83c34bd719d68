#pragma once

#include <stdexcept>
#include <string>

namespace hdx {

// Base of every error the library throws. Callers that only care about
// "the input was bad" can catch this; tests and the CLI match on subtypes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

#define HDX_DEFINE_ERROR(Name)                                               \
    class Name : public Error {                                              \
    public:                                                                  \
        using Error::Error;                                                  \
        const char* kind() const noexcept override { return #Name; }        \
    }

HDX_DEFINE_ERROR(PurityError);
HDX_DEFINE_ERROR(DuplicateFaceError);
HDX_DEFINE_ERROR(EmptyComplexError);
HDX_DEFINE_ERROR(LevelOutOfRangeError);
HDX_DEFINE_ERROR(NotAFaceError);
HDX_DEFINE_ERROR(InvalidParameterError);
HDX_DEFINE_ERROR(DisconnectedGraphError);
HDX_DEFINE_ERROR(GuardrailError);
HDX_DEFINE_ERROR(ParseError);
HDX_DEFINE_ERROR(DimensionError);
HDX_DEFINE_ERROR(NotReversibleError);
HDX_DEFINE_ERROR(DegenerateStateSpaceError);
HDX_DEFINE_ERROR(PreconditionUnmetError);
HDX_DEFINE_ERROR(InvalidProfileError);
HDX_DEFINE_ERROR(AdmissibilityError);
HDX_DEFINE_ERROR(NegativeFunctionError);
HDX_DEFINE_ERROR(SupportError);
HDX_DEFINE_ERROR(OptimizationFailedError);
HDX_DEFINE_ERROR(IoError);

#undef HDX_DEFINE_ERROR

}  // namespace hdx

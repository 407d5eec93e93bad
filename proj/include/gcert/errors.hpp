#pragma once

#include <stdexcept>
#include <string>

namespace gcert {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char *kind() const noexcept = 0;
};

#define GCERT_ERROR(Name)                                                     \
    class Name : public Error {                                               \
    public:                                                                   \
        using Error::Error;                                                   \
        const char *kind() const noexcept override { return #Name; }         \
    }

GCERT_ERROR(ParseError);
GCERT_ERROR(InvalidId);
GCERT_ERROR(InvalidEdge);
GCERT_ERROR(InvalidParams);
GCERT_ERROR(NoPerfectHash);
GCERT_ERROR(NotSatisfiable);
GCERT_ERROR(BitmapTooLarge);
GCERT_ERROR(MalformedCertificate);
GCERT_ERROR(TooLarge);

#undef GCERT_ERROR

} // namespace gcert

#ifndef SCV_ERRORS_HPP
#define SCV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace scv {

// Input/validation errors map to CLI exit code 2, everything else to 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemaError : Error {
    using Error::Error;
};

struct CycleError : Error {
    CycleError(const std::string& from, const std::string& to)
        : Error("edges form a cycle through " + from + " -> " + to), from(from), to(to) {}
    std::string from, to;
};

struct DanglingEdgeError : Error {
    DanglingEdgeError(const std::string& from, const std::string& to, const std::string& missing)
        : Error("edge " + from + " -> " + to + " references unknown statement id '" + missing + "'") {}
};

struct DomainError : Error {
    using Error::Error;
};

struct DegenerateSampleError : Error {
    using Error::Error;
};

struct SizeCapError : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& what, std::size_t offset, std::string expected = {})
        : Error(what + " at offset " + std::to_string(offset) +
                (expected.empty() ? "" : " (expected " + expected + ")")),
          offset(offset), expected(std::move(expected)) {}
    std::size_t offset;
    std::string expected;
};

struct EvaluationError : Error {
    using Error::Error;
};

struct EmptySampleError : Error {
    using Error::Error;
};

struct ProviderError : Error {
    using Error::Error;
};

struct BackendError : Error {
    using Error::Error;
};

struct IrreparableError : Error {
    using Error::Error;
};

struct BoundInvalidError : Error {
    using Error::Error;
};

struct DegenerateError : Error {
    using Error::Error;
};

struct MissingInputError : Error {
    using Error::Error;
};

} // namespace scv

#endif

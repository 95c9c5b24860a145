#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sonode {

enum class Errc {
    MalformedDocument,
    SchemaViolation,
    UnsupportedFeature,
    EmptyDiagram,
    UnknownNode,
    UnknownLink,
    DegenerateRegion,
    NonMonotoneTime,
    NotListening,
    NoActiveTarget,
    FileError,
    SchemaError,
    NonMonotoneTrace,
    ParseError,
    ValidationError,
    VersionMismatch,
};

std::string_view to_string(Errc code);

// Every failure the engine reports carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace sonode

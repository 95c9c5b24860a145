#include "sonode/error.hpp"

namespace sonode {

std::string_view to_string(Errc code)
{
    switch (code) {
    case Errc::MalformedDocument: return "MalformedDocument";
    case Errc::SchemaViolation: return "SchemaViolation";
    case Errc::UnsupportedFeature: return "UnsupportedFeature";
    case Errc::EmptyDiagram: return "EmptyDiagram";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::UnknownLink: return "UnknownLink";
    case Errc::DegenerateRegion: return "DegenerateRegion";
    case Errc::NonMonotoneTime: return "NonMonotoneTime";
    case Errc::NotListening: return "NotListening";
    case Errc::NoActiveTarget: return "NoActiveTarget";
    case Errc::FileError: return "FileError";
    case Errc::SchemaError: return "SchemaError";
    case Errc::NonMonotoneTrace: return "NonMonotoneTrace";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::VersionMismatch: return "VersionMismatch";
    }
    return "Unknown";
}

} // namespace sonode

#include "destfinder/errors.hpp"

#include <algorithm>

namespace destfinder {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::MalformedDocument: return "MalformedDocument";
        case ErrorKind::SchemaViolation: return "SchemaViolation";
        case ErrorKind::MissingRegionTag: return "MissingRegionTag";
        case ErrorKind::DuplicateRegionTag: return "DuplicateRegionTag";
        case ErrorKind::IdMismatch: return "IdMismatch";
        case ErrorKind::EmptyAtlas: return "EmptyAtlas";
    }
    return "Unknown";
}

namespace {

std::string summarize(const std::vector<Violation>& violations) {
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += '\n';
        out += to_string(v.kind);
        out += " at ";
        out += v.path;
        out += ": ";
        out += v.message;
    }
    return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(summarize(violations)), violations_(std::move(violations)) {
    if (violations_.empty()) {
        violations_.push_back({ErrorKind::SchemaViolation, "$", "unspecified validation failure"});
    }
}

bool ValidationError::has(ErrorKind kind) const noexcept {
    return std::any_of(violations_.begin(), violations_.end(),
                       [kind](const Violation& v) { return v.kind == kind; });
}

}  // namespace destfinder

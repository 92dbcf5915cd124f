#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace destfinder {

enum class ErrorKind {
    MalformedDocument,
    SchemaViolation,
    MissingRegionTag,
    DuplicateRegionTag,
    IdMismatch,
    EmptyAtlas,
};

std::string_view to_string(ErrorKind kind);

/// One problem found in an input document. `path` locates the offending field
/// (e.g. `regions[benelux].scores.nature`, `weights.shopping`).
struct Violation {
    ErrorKind kind;
    std::string path;
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
    friend auto operator<=>(const Violation&, const Violation&) = default;
};

/// Thrown when an input fails validation. Carries every violation found,
/// never just the first.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<Violation> violations);

    const std::vector<Violation>& violations() const noexcept { return violations_; }

    /// Kind of the first violation.
    ErrorKind kind() const noexcept { return violations_.front().kind; }
    bool has(ErrorKind kind) const noexcept;

private:
    std::vector<Violation> violations_;
};

/// Filesystem and socket failures, as opposed to bad content.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Accumulates violations during a validation pass.
class ViolationList {
public:
    void add(ErrorKind kind, std::string path, std::string message) {
        items_.push_back({kind, std::move(path), std::move(message)});
    }
    bool empty() const noexcept { return items_.empty(); }
    std::size_t size() const noexcept { return items_.size(); }
    const std::vector<Violation>& items() const noexcept { return items_; }

    void append(const ViolationList& other) {
        items_.insert(items_.end(), other.items_.begin(), other.items_.end());
    }

    /// Throws ValidationError if anything was recorded.
    void throw_if_any() const {
        if (!items_.empty()) throw ValidationError(items_);
    }

private:
    std::vector<Violation> items_;
};

}  // namespace destfinder

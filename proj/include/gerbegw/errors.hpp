#pragma once

#include <stdexcept>
#include <string>

namespace gerbegw {

// Error hierarchy. Three families matter for exit-code mapping in the CLI:
// parse errors, domain errors (bad query, mismatched objects), and limit
// errors (configured caps exceeded).

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct LimitError : std::runtime_error {
    explicit LimitError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IncompatibleLevel : DomainError {
    explicit IncompatibleLevel(const std::string& msg) : DomainError(msg) {}
};

struct GroupMismatch : DomainError {
    explicit GroupMismatch(const std::string& msg) : DomainError(msg) {}
};

struct GroupTooLarge : LimitError {
    explicit GroupTooLarge(const std::string& msg) : LimitError(msg) {}
};

struct EnumerationTooLarge : LimitError {
    explicit EnumerationTooLarge(const std::string& msg) : LimitError(msg) {}
};

struct TruncationTooLarge : LimitError {
    explicit TruncationTooLarge(const std::string& msg) : LimitError(msg) {}
};

struct UnstableTriple : DomainError {
    explicit UnstableTriple(const std::string& msg) : DomainError(msg) {}
};

struct UnsupportedDescendant : DomainError {
    explicit UnsupportedDescendant(const std::string& msg) : DomainError(msg) {}
};

struct MissingTableEntry : DomainError {
    explicit MissingTableEntry(const std::string& msg) : DomainError(msg) {}
};

struct InconsistentPairing : ParseError {
    explicit InconsistentPairing(const std::string& msg) : ParseError(msg) {}
};

struct UnknownTheory : DomainError {
    explicit UnknownTheory(const std::string& msg) : DomainError(msg) {}
};

struct InvalidBoundaryIndex : DomainError {
    explicit InvalidBoundaryIndex(const std::string& msg) : DomainError(msg) {}
};

struct NotAdmissible : DomainError {
    explicit NotAdmissible(const std::string& msg) : DomainError(msg) {}
};

// Signals an implementation bug (an internal identity failed), never bad input.
struct InternalInconsistency : std::logic_error {
    explicit InternalInconsistency(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace gerbegw

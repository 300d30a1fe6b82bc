#pragma once

#include <stdexcept>
#include <string>

namespace bcp {

// Bad user-facing input (files, CLI arguments, malformed ranges).  CLI exit code 3.
struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

// A checked internal invariant failed.  CLI exit code 4.
struct InvariantViolation : std::logic_error {
    explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

// Range with empty interior (e.g. a radius-zero disk).
struct DegenerateRange : InvalidInput {
    explicit DegenerateRange(const std::string& what) : InvalidInput(what) {}
};

// Two arcs on the same supporting curve and branch with overlapping spans.
struct DegenerateOverlap : InvalidInput {
    explicit DegenerateOverlap(const std::string& what) : InvalidInput(what) {}
};

// A cutting sample failed the conflict bound more times than the retry budget allows.
struct CuttingRetryExceeded : InvariantViolation {
    explicit CuttingRetryExceeded(const std::string& what) : InvariantViolation(what) {}
};

}  // namespace bcp

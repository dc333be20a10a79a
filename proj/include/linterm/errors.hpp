/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include <stdexcept>
#include <string>

namespace linterm {

/// A computation exceeded its configured cap. Callers must treat this as
/// "unknown", never as a definite answer.
struct ResourceLimit : std::runtime_error {
    explicit ResourceLimit(const std::string &what) : std::runtime_error(what) {}
};

/// An operation that requires a non-empty polyhedron received an empty one.
struct EmptyInput : std::runtime_error {
    explicit EmptyInput(const std::string &what) : std::runtime_error(what) {}
};

/// Constraints outside the flavor's language (e.g. general deltas fed to the
/// SCT composition).
struct FlavorError : std::runtime_error {
    explicit FlavorError(const std::string &what) : std::runtime_error(what) {}
};

/// Strict inequality over a dense domain, or similar domain misuse.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string &what) : std::runtime_error(what) {}
};

struct SyntaxError : std::runtime_error {
    int line, col;
    SyntaxError(int line_, int col_, const std::string &what)
        : std::runtime_error("syntax error at " + std::to_string(line_) + ":" +
                             std::to_string(col_) + ": " + what),
          line(line_), col(col_) {}
};

struct ArityError : std::runtime_error {
    explicit ArityError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace linterm

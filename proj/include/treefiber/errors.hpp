#pragma once

#include <stdexcept>
#include <string>

namespace treefiber {

// Exit-code taxonomy used by the CLI: 1 usage/parse, 2 certification, 3 resource guard.

struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A verification/certification check failed; carries a printable counterexample.
struct CertificationFailure : std::runtime_error {
    explicit CertificationFailure(const std::string& what) : std::runtime_error(what) {}
};

struct CoverageError : std::runtime_error {
    explicit CoverageError(const std::string& what) : std::runtime_error(what) {}
};

// Memory/overflow/state-count guard tripped; partial results may be attached by the caller.
struct ResourceGuard : std::runtime_error {
    explicit ResourceGuard(const std::string& what) : std::runtime_error(what) {}
};

} // namespace treefiber

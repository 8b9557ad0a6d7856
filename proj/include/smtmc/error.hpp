#pragma once

#include <stdexcept>
#include <string>

namespace smtmc {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Syntax / typing problem in SMT-LIB input, with 1-based source position.
struct ParseError : Error {
    ParseError(const std::string& what, int line, int col)
        : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(col)),
          line(line),
          col(col) {}
    int line;
    int col;
};

// The per-call wall-clock budget of a solver invocation ran out. The counter
// turns this into a failed iteration instead of aborting the whole run.
struct OracleTimeout : Error {
    explicit OracleTimeout(const std::string& what) : Error(what) {}
};

// Solver crashed, produced garbage, or could not be started.
struct OracleFailure : Error {
    explicit OracleFailure(const std::string& what) : Error(what) {}
};

}  // namespace smtmc

#pragma once

#include <optional>
#include <string>

#include "spec.hpp"

namespace linf::cli {

struct Options {
    std::string command;  // check | transfer | invert | kuranishi | bounds
    std::string spec_path;
    std::optional<int> cap;
    bool probe_normalization = false;
    std::string output = "json";  // json | text
    std::optional<std::string> point;
    std::optional<std::string> eps;
    bool timing = false;
};

struct Outcome {
    int exit_code = 0;   // 0 all verdicts pass, 1 verification failure, 2 input error
    std::string out;     // report
    std::string err;     // diagnostics and warnings
};

Outcome run(const Options& opt, const std::string& spec_text);

}  // namespace linf::cli

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "linf/graded.hpp"
#include "linf/palamodov.hpp"
#include "linf/transfer.hpp"

namespace linf::cli {

struct LinearEntry {
    std::string from, to;
    Scalar coefficient;
    bool operator==(const LinearEntry&) const = default;
};

struct BracketEntry {
    std::string i, j, target;
    Scalar coefficient;
    bool operator==(const BracketEntry&) const = default;
};

struct NormSpec {
    std::string mode = "banach";  // "banach" | "scaled"
    std::vector<Scalar> weights;
    std::vector<int> exponents;
    Scalar eps{1, 2};
    bool operator==(const NormSpec&) const = default;
};

struct DglaSpec {
    std::vector<BasisElement> basis;
    std::vector<LinearEntry> d;
    std::vector<BracketEntry> bracket;
    std::optional<std::vector<LinearEntry>> eta;
    std::optional<NormSpec> norm;
    int cap = 4;
    bool probe_normalization = false;

    DGLA dgla() const;
    // η as given, without any check.
    std::optional<LinearMap> given_eta() const;
    NormModel model() const;
    bool operator==(const DglaSpec&) const = default;
};

struct SpecError {
    std::string where;
    std::string message;
};

struct ParseResult {
    std::optional<DglaSpec> spec;
    std::vector<SpecError> errors;
    bool ok() const { return spec.has_value(); }
};

ParseResult parse_spec(std::string_view text);
std::string serialize_spec(const DglaSpec& spec);

inline constexpr int kMaxCap = 6;

}  // namespace linf::cli

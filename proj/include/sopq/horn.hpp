#pragma once

#include <string>
#include <vector>

#include "sopq/special.hpp"

namespace sopq {

// One Pochhammer factor (a, u.n) of a multi-variable Horn series.
struct HornParameter {
    Complex value;
    std::vector<int> row;
};

// Σ_n Π(a, u.n) / Π(b, v.n) · Π x_i^{n_i} / n_i!
struct HornSeriesSpec {
    int variables = 1;
    std::vector<HornParameter> numerator;
    std::vector<HornParameter> denominator;
};

struct BalanceEntry {
    int variable = 0;
    int numerator_sum = 0;
    int denominator_sum = 0;
    bool ok = false;
};

struct ValidationReport {
    bool valid = false;
    std::vector<BalanceEntry> balance;
    std::vector<std::string> problems;  // structural issues (row length, entry range)

    std::string describe() const;
};

ValidationReport validate_spec(const HornSeriesSpec& spec);

// Lattice summation by total-degree shells. Throws ValidationError for an
// invalid spec, DomainError when some |x_i| >= 1 and the series does not
// terminate, PoleError when a denominator vanishes at a nonzero lattice term.
SeriesValue evaluate_horn(const HornSeriesSpec& spec, const std::vector<double>& x,
                          SeriesControl ctl = {});

// Exact sum of the lattice terms with |n| = degree.
Complex shell_terms(const HornSeriesSpec& spec, const std::vector<double>& x, unsigned degree);

// JSON: {"variables": r, "numerator": [{"re":..,"im":..,"row":[..]}], "denominator": [...]}
// Throws ValidationError on malformed documents.
HornSeriesSpec parse_spec(const std::string& text);
std::string format_spec(const HornSeriesSpec& spec);

} // namespace sopq

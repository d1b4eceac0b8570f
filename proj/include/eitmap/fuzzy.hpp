#ifndef EITMAP_FUZZY_HPP
#define EITMAP_FUZZY_HPP

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eitmap/errors.hpp"

namespace eitmap {

/// Piecewise-linear membership function. Triangular uses (a,b,c) with the
/// apex at b; trapezoidal uses (a,b,c,d) with the plateau on [b,c]. Degree is
/// 0 outside the support, 1 at the apex/plateau (including degenerate
/// vertical edges, e.g. triangular(0,0,1) is 1 at x=0) and linear between.
struct MembershipFunction {
    enum class Shape { Triangular, Trapezoidal };

    Shape shape = Shape::Triangular;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0; // trapezoidal only

    static MembershipFunction triangular(double a, double b, double c) {
        return {Shape::Triangular, a, b, c, c};
    }
    static MembershipFunction trapezoidal(double a, double b, double c, double d) {
        return {Shape::Trapezoidal, a, b, c, d};
    }

    double support_min() const { return a; }
    double support_max() const { return shape == Shape::Triangular ? c : d; }

    void validate(const std::string& where) const;
};

double membership_degree(const MembershipFunction& fn, double x);

struct LinguisticVariable {
    std::string name;
    double domain_min = 0.0;
    double domain_max = 1.0;
    std::vector<std::pair<std::string, MembershipFunction>> terms;

    const MembershipFunction* find_term(std::string_view term_name) const;
    void validate(const std::string& where) const;
};

/// Conjunctive rule: IF every antecedent (variable IS term) THEN output IS
/// consequent. Antecedents may cover a subset of the rule base's inputs.
struct Rule {
    std::vector<std::pair<std::string, std::string>> antecedents; // variable -> term
    std::string consequent;
};

struct RuleBase {
    std::vector<LinguisticVariable> inputs;
    LinguisticVariable output;
    std::vector<Rule> rules;
    int resolution = 101; // output-domain sample count

    const LinguisticVariable* find_input(std::string_view name) const;
    void validate() const; // throws ConfigError on any structural problem
};

struct CentroidResult {
    double value = 0.0;
    bool no_mass = false; // all membership degrees were zero
};

/// Center of area over (x, mu) samples: sum(x*mu)/sum(mu). Zero total mass
/// returns the midpoint of the x range with no_mass set.
CentroidResult defuzz_centroid(const std::vector<std::pair<double, double>>& samples);

struct MamdaniResult {
    double value = 0.0;
    bool no_rule_fired = false; // every rule had firing strength 0
    bool no_mass = false;       // aggregate had zero mass at the sampled points
};

/// Mamdani inference: firing strength = min over antecedent degrees,
/// implication = min (clip), aggregation = pointwise max, defuzzification =
/// center of area over `resolution` samples of the output domain. `inputs`
/// must provide an in-domain value for every input variable of `rb`.
MamdaniResult mamdani_evaluate(const RuleBase& rb, const std::map<std::string, double>& inputs);

// JSON form (see config/*.json for examples):
//   { "resolution": 101,
//     "inputs": [ { "name": ..., "domain": [lo, hi],
//                   "terms": { "low": { "shape": "triangular", "params": [a,b,c] }, ... } }, ... ],
//     "output": { same as an input entry },
//     "rules": [ { "if": { "var": "term", ... }, "then": "term" }, ... ] }
// Parse errors name the offending field path.
RuleBase parse_rule_base(const std::string& json_text, const std::string& origin = "rule base");
std::string serialize_rule_base(const RuleBase& rb);
RuleBase load_rule_base(const std::filesystem::path& path);
void write_rule_base(const RuleBase& rb, const std::filesystem::path& path);

} // namespace eitmap

#endif

#include "eitmap/fuzzy.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace eitmap {

void MembershipFunction::validate(const std::string& where) const {
    if (shape == Shape::Triangular) {
        if (!(a <= b && b <= c))
            throw ConfigError(where + ": triangular breakpoints must satisfy a <= b <= c");
    } else {
        if (!(a <= b && b <= c && c <= d))
            throw ConfigError(where + ": trapezoidal breakpoints must satisfy a <= b <= c <= d");
    }
}

double membership_degree(const MembershipFunction& fn, double x) {
    const double plateau_lo = fn.b;
    const double plateau_hi = fn.shape == MembershipFunction::Shape::Triangular ? fn.b : fn.c;
    const double hi = fn.support_max();
    const double rising =
        plateau_lo > fn.a ? (x - fn.a) / (plateau_lo - fn.a) : (x >= fn.a ? 1.0 : 0.0);
    const double falling =
        hi > plateau_hi ? (hi - x) / (hi - plateau_hi) : (x <= hi ? 1.0 : 0.0);
    return std::max(0.0, std::min({rising, 1.0, falling}));
}

const MembershipFunction* LinguisticVariable::find_term(std::string_view term_name) const {
    for (const auto& [name, fn] : terms)
        if (name == term_name)
            return &fn;
    return nullptr;
}

void LinguisticVariable::validate(const std::string& where) const {
    if (name.empty())
        throw ConfigError(where + ": variable name must not be empty");
    if (!(domain_min < domain_max))
        throw ConfigError(where + " (" + name + "): domain must be a non-empty interval");
    if (terms.empty())
        throw ConfigError(where + " (" + name + "): at least one term required");
    std::set<std::string> seen;
    for (const auto& [term_name, fn] : terms) {
        const std::string term_where = where + " (" + name + "." + term_name + ")";
        if (!seen.insert(term_name).second)
            throw ConfigError(term_where + ": duplicate term name");
        fn.validate(term_where);
        if (fn.support_min() < domain_min || fn.support_max() > domain_max)
            throw ConfigError(term_where + ": support exceeds the variable domain");
    }
}

const LinguisticVariable* RuleBase::find_input(std::string_view name) const {
    for (const auto& var : inputs)
        if (var.name == name)
            return &var;
    return nullptr;
}

void RuleBase::validate() const {
    if (inputs.empty())
        throw ConfigError("rule base: at least one input variable required");
    std::set<std::string> input_names;
    for (const auto& var : inputs) {
        var.validate("inputs");
        if (!input_names.insert(var.name).second)
            throw ConfigError("rule base: duplicate input variable \"" + var.name + "\"");
    }
    output.validate("output");
    if (rules.empty())
        throw ConfigError("rule base: rule list must not be empty");
    if (resolution < 2)
        throw ConfigError("rule base: resolution must be at least 2");

    std::set<std::string> combos;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const std::string where = "rules[" + std::to_string(i) + "]";
        const Rule& rule = rules[i];
        if (rule.antecedents.empty())
            throw ConfigError(where + ": rule needs at least one antecedent");
        std::vector<std::pair<std::string, std::string>> sorted = rule.antecedents;
        std::sort(sorted.begin(), sorted.end());
        std::string combo;
        for (const auto& [var_name, term_name] : sorted) {
            const LinguisticVariable* var = find_input(var_name);
            if (var == nullptr)
                throw ConfigError(where + ": unknown input variable \"" + var_name + "\"");
            if (var->find_term(term_name) == nullptr)
                throw ConfigError(where + ": variable \"" + var_name + "\" has no term \"" +
                                  term_name + "\"");
            combo += var_name;
            combo += '=';
            combo += term_name;
            combo += ';';
        }
        for (std::size_t j = 1; j < sorted.size(); ++j)
            if (sorted[j].first == sorted[j - 1].first)
                throw ConfigError(where + ": variable \"" + sorted[j].first +
                                  "\" appears twice in the antecedents");
        if (!combos.insert(combo).second)
            throw ConfigError(where + ": duplicate antecedent combination");
        if (output.find_term(rule.consequent) == nullptr)
            throw ConfigError(where + ": output has no term \"" + rule.consequent + "\"");
    }
}

CentroidResult defuzz_centroid(const std::vector<std::pair<double, double>>& samples) {
    if (samples.empty())
        throw EmptyInput("defuzz_centroid: no samples");
    double num = 0.0;
    double den = 0.0;
    double x_min = samples.front().first;
    double x_max = samples.front().first;
    for (const auto& [x, mu] : samples) {
        num += x * mu;
        den += mu;
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
    }
    if (den == 0.0)
        return {0.5 * (x_min + x_max), true};
    return {num / den, false};
}

MamdaniResult mamdani_evaluate(const RuleBase& rb, const std::map<std::string, double>& inputs) {
    // Fuzzify once per rule: firing strength = min over antecedent degrees.
    std::vector<double> strength;
    strength.reserve(rb.rules.size());
    bool any_fired = false;
    for (const auto& rule : rb.rules) {
        double s = 1.0;
        for (const auto& [var_name, term_name] : rule.antecedents) {
            const LinguisticVariable* var = rb.find_input(var_name);
            if (var == nullptr)
                throw UnknownVariable("mamdani_evaluate: rule references unknown variable \"" +
                                      var_name + "\"");
            const auto it = inputs.find(var_name);
            if (it == inputs.end())
                throw UnknownVariable("mamdani_evaluate: no input value for variable \"" +
                                      var_name + "\"");
            s = std::min(s, membership_degree(*var->find_term(term_name), it->second));
        }
        strength.push_back(s);
        any_fired = any_fired || s > 0.0;
    }
    // Every declared input must be present and in-domain even if no rule uses it.
    for (const auto& var : rb.inputs) {
        const auto it = inputs.find(var.name);
        if (it == inputs.end())
            throw UnknownVariable("mamdani_evaluate: no input value for variable \"" + var.name +
                                  "\"");
        if (it->second < var.domain_min || it->second > var.domain_max)
            throw InputOutOfDomain("mamdani_evaluate: value " + std::to_string(it->second) +
                                   " outside domain of \"" + var.name + "\"");
    }

    const double lo = rb.output.domain_min;
    const double hi = rb.output.domain_max;
    std::vector<std::pair<double, double>> samples;
    samples.reserve(static_cast<std::size_t>(rb.resolution));
    for (int i = 0; i < rb.resolution; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(rb.resolution - 1);
        double agg = 0.0;
        for (std::size_t ri = 0; ri < rb.rules.size(); ++ri) {
            if (strength[ri] == 0.0)
                continue;
            const double mu = membership_degree(*rb.output.find_term(rb.rules[ri].consequent), x);
            agg = std::max(agg, std::min(strength[ri], mu));
        }
        samples.emplace_back(x, agg);
    }

    const CentroidResult centroid = defuzz_centroid(samples);
    return {centroid.value, !any_fired, centroid.no_mass};
}

// ---------------------------------------------------------------------------
// JSON serialization

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const std::string& path) {
    if (!j.is_object())
        throw ConfigError(path + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(path + "." + key + ": missing field");
    return *it;
}

double require_number(const json& j, const std::string& path) {
    if (!j.is_number())
        throw ConfigError(path + ": expected a number");
    return j.get<double>();
}

MembershipFunction parse_membership(const json& j, const std::string& path) {
    const json& shape = require(j, "shape", path);
    const json& params = require(j, "params", path);
    if (!params.is_array())
        throw ConfigError(path + ".params: expected an array");
    std::vector<double> p;
    for (std::size_t i = 0; i < params.size(); ++i)
        p.push_back(require_number(params[i], path + ".params[" + std::to_string(i) + "]"));

    MembershipFunction fn;
    if (shape == "triangular") {
        if (p.size() != 3)
            throw ConfigError(path + ".params: triangular needs exactly 3 breakpoints");
        fn = MembershipFunction::triangular(p[0], p[1], p[2]);
    } else if (shape == "trapezoidal") {
        if (p.size() != 4)
            throw ConfigError(path + ".params: trapezoidal needs exactly 4 breakpoints");
        fn = MembershipFunction::trapezoidal(p[0], p[1], p[2], p[3]);
    } else {
        throw ConfigError(path + ".shape: expected \"triangular\" or \"trapezoidal\"");
    }
    fn.validate(path);
    return fn;
}

LinguisticVariable parse_variable(const json& j, const std::string& path) {
    LinguisticVariable var;
    const json& name = require(j, "name", path);
    if (!name.is_string())
        throw ConfigError(path + ".name: expected a string");
    var.name = name.get<std::string>();
    const json& domain = require(j, "domain", path);
    if (!domain.is_array() || domain.size() != 2)
        throw ConfigError(path + ".domain: expected [min, max]");
    var.domain_min = require_number(domain[0], path + ".domain[0]");
    var.domain_max = require_number(domain[1], path + ".domain[1]");
    const json& terms = require(j, "terms", path);
    if (!terms.is_object())
        throw ConfigError(path + ".terms: expected an object of term -> membership");
    for (const auto& [term_name, fn_json] : terms.items())
        var.terms.emplace_back(term_name,
                               parse_membership(fn_json, path + ".terms." + term_name));
    return var;
}

json membership_to_json(const MembershipFunction& fn) {
    json j;
    if (fn.shape == MembershipFunction::Shape::Triangular) {
        j["shape"] = "triangular";
        j["params"] = {fn.a, fn.b, fn.c};
    } else {
        j["shape"] = "trapezoidal";
        j["params"] = {fn.a, fn.b, fn.c, fn.d};
    }
    return j;
}

json variable_to_json(const LinguisticVariable& var) {
    json terms = json::object();
    for (const auto& [term_name, fn] : var.terms)
        terms[term_name] = membership_to_json(fn);
    return {{"name", var.name}, {"domain", {var.domain_min, var.domain_max}}, {"terms", terms}};
}

} // namespace

RuleBase parse_rule_base(const std::string& json_text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": invalid JSON: " + e.what());
    }

    RuleBase rb;
    const json& inputs = require(doc, "inputs", origin);
    if (!inputs.is_array() || inputs.empty())
        throw ConfigError(origin + ".inputs: expected a non-empty array");
    for (std::size_t i = 0; i < inputs.size(); ++i)
        rb.inputs.push_back(parse_variable(inputs[i], origin + ".inputs[" + std::to_string(i) + "]"));
    rb.output = parse_variable(require(doc, "output", origin), origin + ".output");

    const json& rules = require(doc, "rules", origin);
    if (!rules.is_array())
        throw ConfigError(origin + ".rules: expected an array");
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const std::string path = origin + ".rules[" + std::to_string(i) + "]";
        Rule rule;
        const json& antecedents = require(rules[i], "if", path);
        if (!antecedents.is_object())
            throw ConfigError(path + ".if: expected an object of variable -> term");
        for (const auto& [var_name, term_name] : antecedents.items()) {
            if (!term_name.is_string())
                throw ConfigError(path + ".if." + var_name + ": expected a term name");
            rule.antecedents.emplace_back(var_name, term_name.get<std::string>());
        }
        const json& consequent = require(rules[i], "then", path);
        if (!consequent.is_string())
            throw ConfigError(path + ".then: expected a term name");
        rule.consequent = consequent.get<std::string>();
        rb.rules.push_back(std::move(rule));
    }

    if (doc.contains("resolution")) {
        const json& res = doc["resolution"];
        if (!res.is_number_integer())
            throw ConfigError(origin + ".resolution: expected an integer");
        rb.resolution = res.get<int>();
    }

    try {
        rb.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return rb;
}

std::string serialize_rule_base(const RuleBase& rb) {
    json rules = json::array();
    for (const auto& rule : rb.rules) {
        json antecedents = json::object();
        for (const auto& [var_name, term_name] : rule.antecedents)
            antecedents[var_name] = term_name;
        rules.push_back({{"if", antecedents}, {"then", rule.consequent}});
    }
    json inputs = json::array();
    for (const auto& var : rb.inputs)
        inputs.push_back(variable_to_json(var));
    const json doc = {{"resolution", rb.resolution},
                      {"inputs", inputs},
                      {"output", variable_to_json(rb.output)},
                      {"rules", rules}};
    return doc.dump(2) + "\n";
}

RuleBase load_rule_base(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open rule base file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_rule_base(std::move(buf).str(), path.string());
}

void write_rule_base(const RuleBase& rb, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoFailure("cannot open " + path.string() + " for writing");
    out << serialize_rule_base(rb);
    if (!out)
        throw IoFailure("write failed on " + path.string());
}

} // namespace eitmap

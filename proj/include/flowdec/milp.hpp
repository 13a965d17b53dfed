#pragma once

// Solver-agnostic integer-program representation. Feasibility only: the
// minimization over k happens in the outer search, never as an objective.
// All coefficients, bounds and right-hand sides are exact integers.

#include <cctype>
#include <cstdint>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowdec {

struct var_ref {
    int id = -1;
    bool valid() const { return id >= 0; }
};

enum class var_kind { binary, bounded_integer, free_integer };

struct var_decl {
    var_kind kind = var_kind::bounded_integer;
    long long lb = 0;
    long long ub = 0;  // ignored for free_integer
    std::string name;
};

enum class relation { le, eq, ge };

struct linear_term {
    long long coef = 0;
    var_ref var;
};

struct linear_constraint {
    std::vector<linear_term> terms;
    relation rel = relation::le;
    long long rhs = 0;
    std::string tag;
};

struct assignment {
    std::vector<long long> values;

    long long at(var_ref v) const {
        if (!v.valid() || v.id >= static_cast<int>(values.size()))
            throw std::out_of_range("assignment: unknown variable");
        return values[static_cast<size_t>(v.id)];
    }
};

class milp_model {
public:
    var_ref add_variable(var_kind kind, long long lb, long long ub,
                         std::string name) {
        if (kind == var_kind::binary) {
            lb = 0;
            ub = 1;
        }
        if (kind != var_kind::free_integer && lb > ub)
            throw std::invalid_argument("variable '" + name + "': lb > ub");
        vars_.push_back({kind, lb, ub, std::move(name)});
        return {static_cast<int>(vars_.size()) - 1};
    }

    var_ref add_binary(std::string name) {
        return add_variable(var_kind::binary, 0, 1, std::move(name));
    }

    var_ref add_integer(long long lb, long long ub, std::string name) {
        return add_variable(var_kind::bounded_integer, lb, ub, std::move(name));
    }

    void add_constraint(linear_constraint c) {
        for (const auto& term : c.terms)
            if (!term.var.valid() || term.var.id >= static_cast<int>(vars_.size()))
                throw std::invalid_argument("constraint '" + c.tag +
                                            "': undeclared variable");
        constraints_.push_back(std::move(c));
    }

    void add_constraint(std::vector<linear_term> terms, relation rel,
                        long long rhs, std::string tag = "") {
        add_constraint(linear_constraint{std::move(terms), rel, rhs, std::move(tag)});
    }

    const std::vector<var_decl>& variables() const { return vars_; }
    const std::vector<linear_constraint>& constraints() const { return constraints_; }
    int variable_count() const { return static_cast<int>(vars_.size()); }
    int constraint_count() const { return static_cast<int>(constraints_.size()); }

    // exact integer feasibility re-check; empty result means satisfied
    std::vector<std::string> check(const assignment& a) const {
        std::vector<std::string> bad;
        if (a.values.size() != vars_.size()) {
            bad.push_back("assignment has wrong arity");
            return bad;
        }
        for (size_t i = 0; i < vars_.size(); ++i) {
            const auto& v = vars_[i];
            long long val = a.values[i];
            bool below = v.kind != var_kind::free_integer && val < v.lb;
            bool above = v.kind != var_kind::free_integer && val > v.ub;
            if (below || above)
                bad.push_back("variable " + v.name + " = " + std::to_string(val) +
                              " outside [" + std::to_string(v.lb) + "," +
                              std::to_string(v.ub) + "]");
        }
        for (const auto& c : constraints_) {
            __int128 lhs = 0;
            for (const auto& term : c.terms)
                lhs += static_cast<__int128>(term.coef) *
                       a.values[static_cast<size_t>(term.var.id)];
            bool ok = c.rel == relation::le   ? lhs <= c.rhs
                      : c.rel == relation::eq ? lhs == c.rhs
                                              : lhs >= c.rhs;
            if (!ok) {
                std::ostringstream os;
                os << "constraint " << c.tag << ": lhs "
                   << static_cast<long long>(lhs)
                   << (c.rel == relation::le ? " <= "
                       : c.rel == relation::eq ? " == " : " >= ")
                   << c.rhs << " violated";
                bad.push_back(os.str());
            }
        }
        return bad;
    }

    // standard LP file syntax, for offline debugging
    void write_lp(std::ostream& os) const {
        os << "Minimize\n obj: 0\nSubject To\n";
        for (size_t ci = 0; ci < constraints_.size(); ++ci) {
            const auto& c = constraints_[ci];
            os << " c" << ci;
            if (!c.tag.empty()) {
                os << "_";
                for (char ch : c.tag)
                    os << (std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_');
            }
            os << ":";
            if (c.terms.empty()) os << " 0 x0";
            for (const auto& term : c.terms) {
                if (term.coef >= 0)
                    os << " + " << term.coef;
                else
                    os << " - " << -term.coef;
                os << " x" << term.var.id;
            }
            os << (c.rel == relation::le ? " <= "
                   : c.rel == relation::eq ? " = " : " >= ")
               << c.rhs << "\n";
        }
        os << "Bounds\n";
        for (size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i].kind == var_kind::free_integer)
                os << " x" << i << " free\n";
            else
                os << " " << vars_[i].lb << " <= x" << i << " <= " << vars_[i].ub
                   << "\n";
        }
        os << "Generals\n";
        for (size_t i = 0; i < vars_.size(); ++i) os << " x" << i << "\n";
        os << "End\n";
    }

private:
    std::vector<var_decl> vars_;
    std::vector<linear_constraint> constraints_;
};

enum class solve_status { feasible, infeasible, budget_exceeded, backend_unavailable, error };

inline std::string solve_status_name(solve_status s) {
    switch (s) {
        case solve_status::feasible: return "feasible";
        case solve_status::infeasible: return "infeasible";
        case solve_status::budget_exceeded: return "budget_exceeded";
        case solve_status::backend_unavailable: return "backend_unavailable";
        case solve_status::error: return "error";
    }
    return "?";
}

struct solve_result {
    solve_status status = solve_status::error;
    assignment assign;
    std::string detail;
};

}  // namespace flowdec

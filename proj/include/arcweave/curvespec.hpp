#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arcweave/jet.hpp"

namespace arcweave {

enum class NodeKind { Constant, Variable, Add, Sub, Mul, Div, Neg, Pow, Call };
enum class Func { Exp, Log, Sqrt, Sin, Cos };

struct Node {
    NodeKind kind = NodeKind::Constant;
    Complex value{};
    Func func = Func::Exp;
    int lhs = -1;
    int rhs = -1;
};

/// Expression tree over the single variable t, stored as an arena. A node's
/// index is its stable id; branch state for multivalued nodes is keyed by it.
class CurveAst {
public:
    CurveAst() = default;
    CurveAst(std::vector<Node> nodes, int root);

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const Node& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
    int root() const noexcept { return root_; }

    /// True for subtrees without the variable.
    bool is_constant(int id) const;
    /// Value of a constant subtree (principal branches).
    Complex constant_value(int id) const;
    /// Nodes whose value depends on a branch choice (log, sqrt, non-integer powers).
    bool is_multivalued(int id) const;

    /// Structural equality (arena layout is ignored).
    friend bool operator==(const CurveAst& a, const CurveAst& b);

private:
    std::vector<Node> nodes_;
    int root_ = -1;
};

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double t) const noexcept { return lo < t && t < hi; }
};

struct CurveSpec {
    CurveAst ast;
    Interval domain;
    std::string name;
};

/// Last value of each multivalued node, keyed by node id.
using BranchState = std::map<int, Complex>;

struct JetEvaluation {
    Jet jet;
    BranchState branch;
};

/// Parses "expr" optionally followed by a line "domain: <lo> <hi>".
/// Error positions are 0-based character offsets into the expression.
CurveSpec parse(std::string_view text);
CurveAst parse_expression(std::string_view text);
/// Fully parenthesized rendering that reparses to an identical tree.
std::string print(const CurveAst& ast);

/// Jet of gamma at `center`. Multivalued nodes take the branch nearest to
/// their entry in `branch` (principal branch when absent); the returned state
/// holds the values chosen here.
JetEvaluation eval_jet(const CurveSpec& spec, Complex center, int order,
                       const BranchState& branch = {});
Complex eval_point(const CurveSpec& spec, Complex t, const BranchState& branch = {});

/// Curves from the worked examples: line, circle, spiral2, expspiral,
/// inverse, ex6 (needs tau > 0), ex7; ex1..ex5 and cardioid are aliases.
CurveSpec builtin(std::string_view name, std::optional<double> tau = std::nullopt);
std::vector<std::string> builtin_names();

/// The same curve traversed backwards: t -> -t, domain mirrored.
CurveSpec reversed(const CurveSpec& spec);

}  // namespace arcweave

#include "arcweave/curvespec.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

#include "arcweave/error.hpp"

namespace arcweave {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_integer_exponent(Complex c) {
    return c.imag() == 0.0 && std::abs(c.real()) <= 1024.0 && c.real() == std::round(c.real());
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    CurveAst run() {
        const int root = expr();
        skip_space();
        if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return CurveAst(std::move(nodes_), root);
    }

private:
    [[noreturn]] void fail(const std::string& message) const { throw ParseError(pos_, message); }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    int add(Node n) {
        nodes_.push_back(n);
        return static_cast<int>(nodes_.size()) - 1;
    }

    int binary(NodeKind kind, int lhs, int rhs) { return add({kind, {}, Func::Exp, lhs, rhs}); }

    int expr() {
        int lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = binary(NodeKind::Add, lhs, term());
            } else if (accept('-')) {
                lhs = binary(NodeKind::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    int term() {
        int lhs = factor();
        for (;;) {
            if (accept('*')) {
                lhs = binary(NodeKind::Mul, lhs, factor());
            } else if (accept('/')) {
                lhs = binary(NodeKind::Div, lhs, factor());
            } else {
                return lhs;
            }
        }
    }

    int factor() {
        const int base = unary();
        if (accept('^')) return binary(NodeKind::Pow, base, factor());
        return base;
    }

    int unary() {
        if (accept('-')) return add({NodeKind::Neg, {}, Func::Exp, unary(), -1});
        return atom();
    }

    int atom() {
        skip_space();
        if (pos_ >= text_.size()) fail("expected an operand");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            const int inner = expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail(std::string("unexpected '") + c + "'");
    }

    int number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        // An exponent only when digits follow; otherwise 'e' is left for the
        // parser (and rejected as juxtaposition).
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
            if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
                pos_ = look;
                digits();
            }
        }
        double value = 0;
        const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec != std::errc() || ptr != text_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        return add({NodeKind::Constant, value});
    }

    int identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "t") return add({NodeKind::Variable});
        if (name == "i") return add({NodeKind::Constant, Complex(0, 1)});
        if (name == "pi") return add({NodeKind::Constant, kPi});
        if (name == "e") return add({NodeKind::Constant, std::numbers::e});
        static const std::map<std::string_view, Func> functions = {
            {"exp", Func::Exp}, {"log", Func::Log}, {"sqrt", Func::Sqrt},
            {"sin", Func::Sin}, {"cos", Func::Cos}};
        const auto it = functions.find(name);
        if (it == functions.end()) {
            pos_ = start;
            fail("unknown identifier '" + std::string(name) + "'");
        }
        expect('(');
        const int arg = expr();
        expect(')');
        return add({NodeKind::Call, {}, it->second, arg, -1});
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::vector<Node> nodes_;
};

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_constant(Complex c) {
    if (c == Complex(0, 1)) return "i";
    if (c.imag() == 0.0) {
        if (c.real() < 0) return "(-" + format_real(-c.real()) + ")";
        return format_real(c.real());
    }
    return "(" + format_real(c.real()) + "+" + format_real(c.imag()) + "*i)";
}

const char* func_name(Func f) {
    switch (f) {
        case Func::Exp: return "exp";
        case Func::Log: return "log";
        case Func::Sqrt: return "sqrt";
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
    }
    return "?";
}

Jet integer_power(const Jet& base, long exponent, int node_id) {
    const long n = std::labs(exponent);
    Jet result = Jet::constant(base.center(), 1.0, base.order());
    Jet square = base;
    for (long k = n; k > 0; k >>= 1) {
        if (k & 1) result *= square;
        if (k > 1) square *= square;
    }
    if (exponent < 0) {
        if (result[0] == Complex{}) throw SingularAtCenter(node_id, "negative power of zero");
        result = Jet::constant(base.center(), 1.0, base.order()) / result;
    }
    return result;
}

class JetEvaluator {
public:
    JetEvaluator(const CurveAst& ast, Complex center, int order, const BranchState& previous)
        : ast_(ast), center_(center), order_(order), previous_(previous) {}

    Jet evaluate(int id) {
        const Node& n = ast_.node(id);
        Jet out = dispatch(id, n);
        for (auto c : out.coeffs()) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
                throw SingularAtCenter(id, "non-finite Taylor coefficient");
            }
        }
        return out;
    }

    BranchState take_branch() { return std::move(chosen_); }

private:
    Jet dispatch(int id, const Node& n) {
        switch (n.kind) {
            case NodeKind::Constant: return Jet::constant(center_, n.value, order_);
            case NodeKind::Variable: return Jet::variable(center_, order_);
            case NodeKind::Add: return evaluate(n.lhs) + evaluate(n.rhs);
            case NodeKind::Sub: return evaluate(n.lhs) - evaluate(n.rhs);
            case NodeKind::Mul: return evaluate(n.lhs) * evaluate(n.rhs);
            case NodeKind::Div: {
                Jet num = evaluate(n.lhs);
                Jet den = evaluate(n.rhs);
                if (den[0] == Complex{}) throw SingularAtCenter(id, "division by zero");
                return num / den;
            }
            case NodeKind::Neg: return -evaluate(n.lhs);
            case NodeKind::Pow: return power(id, n);
            case NodeKind::Call: return call(id, n);
        }
        throw Error(ErrorCode::InvalidArgument, "corrupt expression node");
    }

    Jet power(int id, const Node& n) {
        Jet base = evaluate(n.lhs);
        if (ast_.is_constant(n.rhs)) {
            const Complex alpha = ast_.constant_value(n.rhs);
            if (is_integer_exponent(alpha)) {
                return integer_power(base, static_cast<long>(alpha.real()), id);
            }
            return exp(tracked_log(id, base) * alpha);
        }
        Jet exponent = evaluate(n.rhs);
        return exp(tracked_log(id, base) * exponent);
    }

    Jet call(int id, const Node& n) {
        Jet arg = evaluate(n.lhs);
        switch (n.func) {
            case Func::Exp: return exp(arg);
            case Func::Sin: return sin(arg);
            case Func::Cos: return cos(arg);
            case Func::Log: return tracked_log(id, arg);
            case Func::Sqrt: return tracked_sqrt(id, arg);
        }
        throw Error(ErrorCode::InvalidArgument, "corrupt call node");
    }

    // log branches differ by 2 pi i; pick the one whose imaginary part is
    // nearest the previous value.
    Jet tracked_log(int id, const Jet& arg) {
        if (arg[0] == Complex{}) throw SingularAtCenter(id, "log of zero");
        Complex value = std::log(arg[0]);
        if (const auto it = previous_.find(id); it != previous_.end()) {
            const double turns = std::round((it->second.imag() - value.imag()) / (2 * kPi));
            value += Complex(0, 2 * kPi * turns);
            if (std::abs(value.imag() - it->second.imag()) > kPi / 2) {
                throw Error(ErrorCode::BranchJumpDetected,
                            "log at node " + std::to_string(id) + " moved more than pi/2");
            }
        }
        chosen_[id] = value;
        return log(arg, BranchSeed{value});
    }

    // sqrt branches are +-v with gap 2|v|.
    Jet tracked_sqrt(int id, const Jet& arg) {
        if (arg[0] == Complex{}) throw SingularAtCenter(id, "sqrt of zero");
        Complex value = std::sqrt(arg[0]);
        if (const auto it = previous_.find(id); it != previous_.end()) {
            if (std::abs(-value - it->second) < std::abs(value - it->second)) value = -value;
            if (std::abs(value - it->second) > std::abs(value)) {
                throw Error(ErrorCode::BranchJumpDetected,
                            "sqrt at node " + std::to_string(id) + " moved more than half the branch gap");
            }
        }
        chosen_[id] = value;
        return sqrt(arg, BranchSeed{value});
    }

    const CurveAst& ast_;
    Complex center_;
    int order_;
    const BranchState& previous_;
    BranchState chosen_;
};

struct BuiltinDef {
    const char* name;
    const char* expression;
    Interval domain;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<BuiltinDef>& builtin_table() {
    static const std::vector<BuiltinDef> table = {
        {"line", "t", {-kInf, kInf}},
        {"circle", "exp(i*t)", {-kInf, kInf}},
        {"spiral2", "(exp(i*t)-1)*exp((exp(i*t)+1)/(exp(i*t)-1))", {0.0, 2 * kPi}},
        {"expspiral", "exp(t)*exp(i/t)", {-kInf, 0.0}},
        {"inverse", "1/t", {-kInf, 0.0}},
        {"ex6", "(exp(i*t)-1)^TAU*exp((exp(i*t)+1)/(exp(i*t)-1))", {0.0, 2 * kPi}},
        {"ex7", "(exp(i*t) - 2/3)^2", {-kInf, kInf}},
    };
    return table;
}

std::string_view canonical_builtin(std::string_view name) {
    static const std::map<std::string_view, std::string_view> aliases = {
        {"ex1", "line"},    {"ex2", "circle"},  {"ex3", "spiral2"},
        {"ex4", "expspiral"}, {"ex5", "inverse"}, {"cardioid", "ex7"}};
    if (const auto it = aliases.find(name); it != aliases.end()) return it->second;
    return name;
}

double parse_bound(std::string_view token) {
    if (token == "inf" || token == "+inf") return kInf;
    if (token == "-inf") return -kInf;
    const CurveAst ast = parse_expression(token);
    if (!ast.is_constant(ast.root())) {
        throw Error(ErrorCode::InvalidArgument, "domain bound depends on t");
    }
    const Complex v = ast.constant_value(ast.root());
    if (v.imag() != 0.0) throw Error(ErrorCode::InvalidArgument, "domain bound is not real");
    return v.real();
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

CurveAst::CurveAst(std::vector<Node> nodes, int root) : nodes_(std::move(nodes)), root_(root) {}

bool CurveAst::is_constant(int id) const {
    const Node& n = node(id);
    switch (n.kind) {
        case NodeKind::Constant: return true;
        case NodeKind::Variable: return false;
        case NodeKind::Neg:
        case NodeKind::Call: return is_constant(n.lhs);
        default: return is_constant(n.lhs) && is_constant(n.rhs);
    }
}

Complex CurveAst::constant_value(int id) const {
    const Node& n = node(id);
    switch (n.kind) {
        case NodeKind::Constant: return n.value;
        case NodeKind::Add: return constant_value(n.lhs) + constant_value(n.rhs);
        case NodeKind::Sub: return constant_value(n.lhs) - constant_value(n.rhs);
        case NodeKind::Mul: return constant_value(n.lhs) * constant_value(n.rhs);
        case NodeKind::Div: return constant_value(n.lhs) / constant_value(n.rhs);
        case NodeKind::Neg: return -constant_value(n.lhs);
        case NodeKind::Pow: {
            const Complex b = constant_value(n.lhs);
            const Complex p = constant_value(n.rhs);
            if (is_integer_exponent(p)) return std::pow(b, static_cast<int>(p.real()));
            return std::pow(b, p);
        }
        case NodeKind::Call: {
            const Complex a = constant_value(n.lhs);
            switch (n.func) {
                case Func::Exp: return std::exp(a);
                case Func::Log: return std::log(a);
                case Func::Sqrt: return std::sqrt(a);
                case Func::Sin: return std::sin(a);
                case Func::Cos: return std::cos(a);
            }
            break;
        }
        case NodeKind::Variable: break;
    }
    throw Error(ErrorCode::InvalidArgument, "subtree is not constant");
}

bool CurveAst::is_multivalued(int id) const {
    const Node& n = node(id);
    if (n.kind == NodeKind::Call) return n.func == Func::Log || n.func == Func::Sqrt;
    if (n.kind == NodeKind::Pow) {
        return !is_constant(n.rhs) || !is_integer_exponent(constant_value(n.rhs));
    }
    return false;
}

bool operator==(const CurveAst& a, const CurveAst& b) {
    std::function<bool(int, int)> same = [&](int x, int y) -> bool {
        if (x < 0 || y < 0) return x == y;
        const Node& m = a.node(x);
        const Node& n = b.node(y);
        if (m.kind != n.kind) return false;
        if (m.kind == NodeKind::Constant) return m.value == n.value;
        if (m.kind == NodeKind::Call && m.func != n.func) return false;
        return same(m.lhs, n.lhs) && same(m.rhs, n.rhs);
    };
    return same(a.root(), b.root());
}

CurveAst parse_expression(std::string_view text) { return Parser(text).run(); }

CurveSpec parse(std::string_view text) {
    const auto newline = text.find('\n');
    const std::string expression = trim(text.substr(0, newline));
    CurveSpec spec{parse_expression(expression), {}, expression};
    if (newline == std::string_view::npos) return spec;

    const std::string rest = trim(text.substr(newline + 1));
    if (rest.empty()) return spec;
    std::istringstream in(rest);
    std::string key, lo, hi, extra;
    in >> key >> lo >> hi;
    if (key != "domain:" || lo.empty() || hi.empty() || (in >> extra)) {
        throw Error(ErrorCode::InvalidArgument, "second line must read 'domain: <lo> <hi>'");
    }
    spec.domain = {parse_bound(lo), parse_bound(hi)};
    if (!(spec.domain.lo < spec.domain.hi)) {
        throw Error(ErrorCode::InvalidArgument, "empty domain");
    }
    return spec;
}

std::string print(const CurveAst& ast) {
    std::function<std::string(int)> render = [&](int id) -> std::string {
        const Node& n = ast.node(id);
        switch (n.kind) {
            case NodeKind::Constant: return format_constant(n.value);
            case NodeKind::Variable: return "t";
            case NodeKind::Add: return "(" + render(n.lhs) + " + " + render(n.rhs) + ")";
            case NodeKind::Sub: return "(" + render(n.lhs) + " - " + render(n.rhs) + ")";
            case NodeKind::Mul: return "(" + render(n.lhs) + " * " + render(n.rhs) + ")";
            case NodeKind::Div: return "(" + render(n.lhs) + " / " + render(n.rhs) + ")";
            case NodeKind::Neg: return "(-" + render(n.lhs) + ")";
            case NodeKind::Pow: return "(" + render(n.lhs) + " ^ " + render(n.rhs) + ")";
            case NodeKind::Call: return std::string(func_name(n.func)) + "(" + render(n.lhs) + ")";
        }
        return "?";
    };
    return render(ast.root());
}

JetEvaluation eval_jet(const CurveSpec& spec, Complex center, int order, const BranchState& branch) {
    if (order < 0) throw Error(ErrorCode::InvalidArgument, "negative jet order");
    JetEvaluator evaluator(spec.ast, center, order, branch);
    Jet jet = evaluator.evaluate(spec.ast.root());
    // Keep entries of nodes not visited this time (none for a fixed tree, but
    // callers may share state across related expressions).
    BranchState next = branch;
    for (auto& [id, value] : evaluator.take_branch()) next[id] = value;
    return {std::move(jet), std::move(next)};
}

Complex eval_point(const CurveSpec& spec, Complex t, const BranchState& branch) {
    return eval_jet(spec, t, 1, branch).jet[0];
}

CurveSpec builtin(std::string_view name, std::optional<double> tau) {
    const std::string_view key = canonical_builtin(name);
    for (const auto& def : builtin_table()) {
        if (key != def.name) continue;
        std::string expression = def.expression;
        std::string label = def.name;
        if (const auto at = expression.find("TAU"); at != std::string::npos) {
            if (!tau || !(*tau > 0) || !std::isfinite(*tau)) {
                throw Error(ErrorCode::InvalidArgument, "builtin ex6 needs tau > 0");
            }
            expression.replace(at, 3, format_real(*tau));
            label += "(tau=" + format_real(*tau) + ")";
        }
        return {parse_expression(expression), def.domain, label};
    }
    throw Error(ErrorCode::UnknownBuiltin, "no builtin named '" + std::string(name) + "'");
}

std::vector<std::string> builtin_names() {
    std::vector<std::string> names;
    for (const auto& def : builtin_table()) names.emplace_back(def.name);
    return names;
}

CurveSpec reversed(const CurveSpec& spec) {
    std::vector<Node> nodes = spec.ast.nodes();
    // Replace every use of t by (-t): append a Neg node per variable use.
    std::vector<Node> out = nodes;
    for (std::size_t id = 0; id < nodes.size(); ++id) {
        if (nodes[id].kind != NodeKind::Variable) continue;
        out.push_back({NodeKind::Variable});
        const int var = static_cast<int>(out.size()) - 1;
        out[id] = {NodeKind::Neg, {}, Func::Exp, var, -1};
    }
    return {CurveAst(std::move(out), spec.ast.root()), {-spec.domain.hi, -spec.domain.lo},
            spec.name + " (reversed)"};
}

}  // namespace arcweave

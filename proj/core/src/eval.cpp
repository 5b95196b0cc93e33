#include "flexpp/eval.hpp"

#include "flexpp/glob.hpp"

#include <array>
#include <limits>
#include <optional>

namespace flexpp {

namespace {

constexpr std::size_t kMaxNesting = 256;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_word_char(char c) {
    switch (c) {
    case '(': case ')': case '+': case '-': case '*': case '/': case '%': case '=': case '!':
    case '<': case '>': case '&': case '|': case '~': case '\'': case ',':
        return false;
    default:
        return !is_space(c);
    }
}

// Longest first, so "<=" wins over "<".
constexpr std::array<std::string_view, 18> kOperators{
    "||", "&&", "==", "!=", "<=", ">=", "~=", "<", ">", "+", "-", "*", "/", "%", "!", "(", ")", ",",
};

std::optional<BinaryOp> comparison(std::string_view op) {
    if (op == "==") return BinaryOp::Eq;
    if (op == "!=") return BinaryOp::Ne;
    if (op == "<") return BinaryOp::Lt;
    if (op == "<=") return BinaryOp::Le;
    if (op == ">") return BinaryOp::Gt;
    if (op == ">=") return BinaryOp::Ge;
    if (op == "~=") return BinaryOp::Glob;
    return std::nullopt;
}

ExprPtr make(ExprNode::Literal lit, std::size_t offset) {
    return std::make_unique<ExprNode>(ExprNode{std::move(lit), offset});
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    ExprPtr parse() {
        auto e = parse_or();
        skip_space();
        if (pos_ < src_.size())
            fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw EvalError(EvalError::Kind::Syntax, "syntax error: " + msg, pos_);
    }

    void skip_space() {
        while (pos_ < src_.size() && is_space(src_[pos_]))
            ++pos_;
    }

    std::string_view peek_operator() {
        skip_space();
        for (auto op : kOperators)
            if (src_.substr(pos_, op.size()) == op)
                return op;
        return {};
    }

    ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, std::size_t offset) {
        return std::make_unique<ExprNode>(
            ExprNode{ExprNode::Binary{op, std::move(lhs), std::move(rhs)}, offset});
    }

    struct NestingGuard {
        explicit NestingGuard(Parser& p) : p(p) {
            if (++p.depth_ > kMaxNesting)
                p.fail("expression nested too deeply");
        }
        ~NestingGuard() { --p.depth_; }
        Parser& p;
    };

    ExprPtr parse_or() {
        NestingGuard guard(*this);
        auto lhs = parse_and();
        while (peek_operator() == "||") {
            std::size_t at = pos_;
            pos_ += 2;
            lhs = binary(BinaryOp::Or, std::move(lhs), parse_and(), at);
        }
        return lhs;
    }

    ExprPtr parse_and() {
        auto lhs = parse_comparison();
        while (peek_operator() == "&&") {
            std::size_t at = pos_;
            pos_ += 2;
            lhs = binary(BinaryOp::And, std::move(lhs), parse_comparison(), at);
        }
        return lhs;
    }

    ExprPtr parse_comparison() {
        auto lhs = parse_additive();
        auto text = peek_operator();
        auto op = comparison(text);
        if (!op)
            return lhs;
        std::size_t at = pos_;
        pos_ += text.size();
        auto rhs = *op == BinaryOp::Glob ? parse_pattern() : parse_additive();
        if (comparison(peek_operator()))
            fail("comparison operators cannot be chained");
        return binary(*op, std::move(lhs), std::move(rhs), at);
    }

    ExprPtr parse_pattern() {
        skip_space();
        if (pos_ < src_.size() && (src_[pos_] == '(' || src_[pos_] == '\''))
            return parse_additive();
        std::size_t begin = pos_;
        while (pos_ < src_.size() && !is_space(src_[pos_]) && src_[pos_] != ')')
            ++pos_;
        if (pos_ == begin)
            fail("expected a pattern after '~='");
        return make({ExprValue(std::string(src_.substr(begin, pos_ - begin)))}, begin);
    }

    ExprPtr parse_additive() {
        auto lhs = parse_multiplicative();
        for (;;) {
            auto op = peek_operator();
            if (op != "+" && op != "-")
                return lhs;
            std::size_t at = pos_++;
            lhs = binary(op == "+" ? BinaryOp::Add : BinaryOp::Sub, std::move(lhs),
                         parse_multiplicative(), at);
        }
    }

    ExprPtr parse_multiplicative() {
        auto lhs = parse_unary();
        for (;;) {
            auto op = peek_operator();
            BinaryOp b;
            if (op == "*") b = BinaryOp::Mul;
            else if (op == "/") b = BinaryOp::Div;
            else if (op == "%") b = BinaryOp::Mod;
            else return lhs;
            std::size_t at = pos_++;
            lhs = binary(b, std::move(lhs), parse_unary(), at);
        }
    }

    ExprPtr parse_unary() {
        NestingGuard guard(*this);
        auto op = peek_operator();
        if (op == "-" || op == "!") {
            std::size_t at = pos_++;
            auto operand = parse_unary();
            return std::make_unique<ExprNode>(ExprNode{
                ExprNode::Unary{op == "-" ? UnaryOp::Negate : UnaryOp::Not, std::move(operand)},
                at});
        }
        return parse_atom();
    }

    void expect(char c) {
        skip_space();
        if (pos_ >= src_.size() || src_[pos_] != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string quoted() {
        std::size_t open = pos_++;
        auto close = src_.find('\'', pos_);
        if (close == std::string_view::npos) {
            pos_ = open;
            fail("unterminated quoted text");
        }
        std::string s(src_.substr(pos_, close - pos_));
        pos_ = close + 1;
        return s;
    }

    ExprPtr parse_atom() {
        skip_space();
        if (pos_ >= src_.size())
            fail("expected an operand");
        const std::size_t at = pos_;
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            auto e = parse_or();
            expect(')');
            return e;
        }
        if (c == '\'') {
            auto s = quoted();
            return make({ExprValue::from_literal(s, at)}, at);
        }
        if (!is_word_char(c))
            fail("unexpected '" + std::string(1, c) + "'");
        while (pos_ < src_.size() && is_word_char(src_[pos_]))
            ++pos_;
        std::string_view word = src_.substr(at, pos_ - at);

        if (word == "defined" || word == "length") {
            std::size_t save = pos_;
            skip_space();
            if (pos_ < src_.size() && src_[pos_] == '(') {
                ++pos_;
                ExprNode::Call call{word == "defined" ? Builtin::Defined : Builtin::Length, {}};
                if (call.fn == Builtin::Defined) {
                    skip_space();
                    std::size_t name_at = pos_;
                    std::string name;
                    if (pos_ < src_.size() && src_[pos_] == '\'') {
                        name = quoted();
                    } else {
                        while (pos_ < src_.size() && is_word_char(src_[pos_]))
                            ++pos_;
                        name = std::string(src_.substr(name_at, pos_ - name_at));
                    }
                    if (name.empty())
                        fail("defined() needs a macro name");
                    call.args.push_back(make({ExprValue(std::move(name))}, name_at));
                } else {
                    call.args.push_back(parse_or());
                }
                expect(')');
                return std::make_unique<ExprNode>(ExprNode{std::move(call), at});
            }
            pos_ = save;
        }
        return make({ExprValue::from_literal(word, at)}, at);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t depth_ = 0;
};

[[noreturn]] void type_error(std::string_view op, std::size_t offset) {
    throw EvalError(EvalError::Kind::Type,
                    "operator '" + std::string(op) + "' requires integer operands", offset);
}

[[noreturn]] void overflow(std::string_view op, std::size_t offset) {
    throw EvalError(EvalError::Kind::Overflow,
                    "integer overflow in '" + std::string(op) + "'", offset);
}

class Evaluator {
public:
    explicit Evaluator(const DefinedFn& defined) : defined_(defined) {}

    ExprValue eval(const ExprNode& n) {
        return std::visit([&](const auto& node) { return eval_node(node, n.offset); }, n.node);
    }

private:
    ExprValue eval_node(const ExprNode::Literal& lit, std::size_t) { return lit.value; }

    std::int64_t truth(const ExprValue& v, std::string_view op, std::size_t offset) {
        if (!v.is_integer())
            type_error(op, offset);
        return v.integer();
    }

    ExprValue eval_node(const ExprNode::Unary& u, std::size_t offset) {
        ExprValue v = eval(*u.operand);
        auto spelling = op_spelling(u.op);
        std::int64_t x = truth(v, spelling, offset);
        if (u.op == UnaryOp::Not)
            return std::int64_t{x == 0};
        if (x == std::numeric_limits<std::int64_t>::min())
            overflow(spelling, offset);
        return -x;
    }

    ExprValue eval_node(const ExprNode::Call& c, std::size_t) {
        if (c.fn == Builtin::Defined) {
            const auto& name = std::get<ExprNode::Literal>(c.args.front()->node).value.text();
            return std::int64_t{defined_ && defined_(name)};
        }
        return static_cast<std::int64_t>(eval(*c.args.front()).text().size());
    }

    ExprValue eval_node(const ExprNode::Binary& b, std::size_t offset) {
        const auto spelling = op_spelling(b.op);
        if (b.op == BinaryOp::And || b.op == BinaryOp::Or) {
            bool lhs = truth(eval(*b.lhs), spelling, offset) != 0;
            if (b.op == BinaryOp::And && !lhs) return std::int64_t{0};
            if (b.op == BinaryOp::Or && lhs) return std::int64_t{1};
            return std::int64_t{truth(eval(*b.rhs), spelling, offset) != 0};
        }

        ExprValue l = eval(*b.lhs);
        ExprValue r = eval(*b.rhs);
        const bool ints = l.is_integer() && r.is_integer();

        switch (b.op) {
        case BinaryOp::Eq:
            return std::int64_t{ints ? l.integer() == r.integer() : l.text() == r.text()};
        case BinaryOp::Ne:
            return std::int64_t{ints ? l.integer() != r.integer() : l.text() != r.text()};
        case BinaryOp::Glob:
            try {
                return std::int64_t{glob_match(r.text(), l.text())};
            } catch (const PatternError& e) {
                throw EvalError(EvalError::Kind::Pattern, e.what(), b.rhs->offset);
            }
        default:
            break;
        }

        if (!ints)
            type_error(spelling, offset);
        const std::int64_t x = l.integer(), y = r.integer();
        std::int64_t out = 0;
        switch (b.op) {
        case BinaryOp::Lt: return std::int64_t{x < y};
        case BinaryOp::Le: return std::int64_t{x <= y};
        case BinaryOp::Gt: return std::int64_t{x > y};
        case BinaryOp::Ge: return std::int64_t{x >= y};
        case BinaryOp::Add:
            if (__builtin_add_overflow(x, y, &out)) overflow(spelling, offset);
            return out;
        case BinaryOp::Sub:
            if (__builtin_sub_overflow(x, y, &out)) overflow(spelling, offset);
            return out;
        case BinaryOp::Mul:
            if (__builtin_mul_overflow(x, y, &out)) overflow(spelling, offset);
            return out;
        case BinaryOp::Div:
        case BinaryOp::Mod:
            if (y == 0)
                throw EvalError(EvalError::Kind::DivisionByZero,
                                std::string(b.op == BinaryOp::Div ? "division" : "modulo") +
                                    " by zero in '" + std::string(spelling) + "'",
                                offset);
            if (x == std::numeric_limits<std::int64_t>::min() && y == -1) {
                if (b.op == BinaryOp::Mod) return std::int64_t{0};
                overflow(spelling, offset);
            }
            return b.op == BinaryOp::Div ? x / y : x % y;
        default:
            break;
        }
        return std::int64_t{0};
    }

    const DefinedFn& defined_;
};

void render(const ExprNode& n, std::string& out) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, ExprNode::Literal>) {
                if (node.value.is_integer())
                    out += node.value.text();
                else
                    out += "'" + node.value.text() + "'";
            } else if constexpr (std::is_same_v<T, ExprNode::Unary>) {
                out += "(";
                out += op_spelling(node.op);
                out += " ";
                render(*node.operand, out);
                out += ")";
            } else if constexpr (std::is_same_v<T, ExprNode::Binary>) {
                out += "(";
                out += op_spelling(node.op);
                out += " ";
                render(*node.lhs, out);
                out += " ";
                render(*node.rhs, out);
                out += ")";
            } else {
                out += node.fn == Builtin::Defined ? "(defined" : "(length";
                for (const auto& a : node.args) {
                    out += " ";
                    render(*a, out);
                }
                out += ")";
            }
        },
        n.node);
}

} // namespace

ExprValue ExprValue::from_literal(std::string_view literal, std::size_t offset) {
    std::size_t i = 0;
    if (!literal.empty() && (literal[0] == '+' || literal[0] == '-'))
        i = 1;
    if (i == literal.size())
        return ExprValue(std::string(literal));
    for (std::size_t j = i; j < literal.size(); ++j)
        if (literal[j] < '0' || literal[j] > '9')
            return ExprValue(std::string(literal));

    const bool negative = literal[0] == '-';
    std::int64_t v = 0;
    for (std::size_t j = i; j < literal.size(); ++j) {
        const int digit = literal[j] - '0';
        if (__builtin_mul_overflow(v, 10, &v) ||
            __builtin_add_overflow(v, negative ? -digit : digit, &v))
            throw EvalError(EvalError::Kind::Overflow,
                            "integer literal '" + std::string(literal) + "' out of range", offset);
    }
    return ExprValue(v);
}

std::string ExprValue::text() const {
    if (is_integer())
        return std::to_string(integer());
    return std::get<std::string>(value_);
}

std::string_view op_spelling(UnaryOp op) { return op == UnaryOp::Negate ? "-" : "!"; }

std::string_view op_spelling(BinaryOp op) {
    switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
    case BinaryOp::Glob: return "~=";
    }
    return "?";
}

ExprAst parse_expr(std::string_view text) { return Parser(text).parse(); }

std::string to_sexpr(const ExprNode& node) {
    std::string out;
    render(node, out);
    return out;
}

ExprValue eval_expr(const ExprNode& ast, const DefinedFn& defined) {
    return Evaluator(defined).eval(ast);
}

ExprValue evaluate(std::string_view text, const DefinedFn& defined) {
    auto ast = parse_expr(text);
    return eval_expr(*ast, defined);
}

} // namespace flexpp

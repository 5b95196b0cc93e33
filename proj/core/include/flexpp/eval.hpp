#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace flexpp {

/// Result of evaluating an expression: a signed 64-bit integer or text.
class ExprValue {
public:
    ExprValue() : value_(std::int64_t{0}) {}
    ExprValue(std::int64_t v) : value_(v) {}
    ExprValue(std::string v) : value_(std::move(v)) {}

    /// Integer iff `literal` is an optional sign followed by decimal digits.
    /// Throws EvalError (overflow) for integers outside 64 bits.
    static ExprValue from_literal(std::string_view literal, std::size_t offset = 0);

    bool is_integer() const { return std::holds_alternative<std::int64_t>(value_); }
    std::int64_t integer() const { return std::get<std::int64_t>(value_); }
    /// Decimal rendering for integers, the bytes themselves for text.
    std::string text() const;

    bool operator==(const ExprValue&) const = default;

private:
    std::variant<std::int64_t, std::string> value_;
};

class EvalError : public std::runtime_error {
public:
    enum class Kind { Syntax, Type, DivisionByZero, Overflow, Pattern };

    EvalError(Kind kind, const std::string& message, std::size_t offset)
        : std::runtime_error(message + " at offset " + std::to_string(offset)),
          kind_(kind), offset_(offset) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    Kind kind_;
    std::size_t offset_;
};

enum class UnaryOp { Negate, Not };
enum class BinaryOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or, Glob };
enum class Builtin { Defined, Length };

std::string_view op_spelling(UnaryOp op);
std::string_view op_spelling(BinaryOp op);

struct ExprNode;
using ExprPtr = std::unique_ptr<ExprNode>;

struct ExprNode {
    struct Literal { ExprValue value; };
    struct Unary { UnaryOp op; ExprPtr operand; };
    struct Binary { BinaryOp op; ExprPtr lhs; ExprPtr rhs; };
    /// defined(name) holds the name as a text literal argument.
    struct Call { Builtin fn; std::vector<ExprPtr> args; };

    std::variant<Literal, Unary, Binary, Call> node;
    std::size_t offset = 0;
};

using ExprAst = ExprPtr;

/// Parses the expression grammar, lowest precedence first:
///   ||   &&   == != < <= > >= ~= (non-associative)   + -   * / %   unary - !
/// Atoms: integers, bare words (text), 'quoted text', (expr), defined(name),
/// length(expr). A bare right operand of ~= is read up to the next blank or
/// ')' so that glob characters need no quoting.
ExprAst parse_expr(std::string_view text);

/// Prefix rendering, e.g. "(+ 2 (* 3 4))". Used to inspect tree shape.
std::string to_sexpr(const ExprNode& node);

using DefinedFn = std::function<bool(std::string_view)>;

/// Evaluates with checked 64-bit arithmetic. `defined` answers defined(name).
ExprValue eval_expr(const ExprNode& ast, const DefinedFn& defined);

/// parse_expr + eval_expr.
ExprValue evaluate(std::string_view text, const DefinedFn& defined);

} // namespace flexpp

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rfde {

// Malformed source text. `position` is a 0-based byte offset into the input.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position(position) {}
    std::size_t position;
};

// Well-formed expression evaluated outside its domain (1/0, ln of a
// nonpositive number, fractional power of a negative base, ...).
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Arithmetic formula in the variables t and theta.
//
// Grammar: + - * / ^ with the usual precedence (^ binds tighter than unary
// minus, which binds tighter than * /), left-associative + - * /,
// right-associative ^, parentheses, and the calls exp, ln, sin, cos, sqrt,
// abs. Literals are decimal with an optional exponent. Everything evaluates
// over the reals; operations that would leave the reals (ln of a negative
// number, (-2)^0.5) raise EvalError instead of picking a branch.
//
// Immutable after parse; copies share the tree and evaluation is safe from
// multiple threads concurrently.
class Expression {
public:
    struct Node;

    static Expression parse(std::string_view source);

    // Evaluate with the given bindings. Referencing an unbound variable is
    // an EvalError, as is any domain error or a non-finite result.
    double operator()(double t) const;
    double operator()(double t, double theta) const;

    bool uses_t() const { return uses_t_; }
    bool uses_theta() const { return uses_theta_; }
    bool is_constant() const { return !uses_t_ && !uses_theta_; }

    // Parseable text; parse(str()) evaluates identically to *this.
    std::string str() const;

    // Structural probes for the antiderivative table.
    std::optional<double> as_constant() const;
    struct ReciprocalAffine {
        double scale;   // k in k/(t + offset)
        double offset;
    };
    std::optional<ReciprocalAffine> as_reciprocal_in_t() const;

private:
    explicit Expression(std::shared_ptr<const Node> root);
    std::shared_ptr<const Node> root_;
    bool uses_t_ = false;
    bool uses_theta_ = false;
};

} // namespace rfde

#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "haarfree/polyalg/polynomial.hpp"

namespace haarfree::parse {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t column)
        : std::runtime_error(what + " at column " + std::to_string(column)), column_(column) {}
    // 1-based
    std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

struct PolyExpr {
    enum class Kind { Scalar, Letter, Adjoint, Power, Product, Sum, Negation, Parenthesized };

    Kind kind = Kind::Scalar;
    std::complex<double> value{};  // Scalar
    bool deterministic = false;    // Letter: Z rather than U
    int index = 0;                 // Letter index, or exponent for Power
    std::vector<char> ops;         // Sum: '+' or '-' before children[1..]
    std::vector<std::unique_ptr<PolyExpr>> children;
    std::size_t column = 0;
};

// Syntax only; letter bounds are checked when lowering.
std::unique_ptr<PolyExpr> parse_ast(std::string_view text);

// Letters U1..Up map to Y_1..Y_p, Z1..Zq to Y_{p+1}..Y_{p+q}.
poly::Polynomial lower(const PolyExpr& e, int p, int q);

poly::Polynomial parse(std::string_view text, int p, int q);

std::string format(const poly::Polynomial& P);
std::string format_coefficient(std::complex<double> c);

}  // namespace haarfree::parse

#include "haarfree/rmt/matrix.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

namespace haarfree::rmt {

namespace {
constexpr std::array<char, 4> kMagic = {'H', 'F', 'M', 'X'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <class T>
T get(std::istream& is) {
    T v{};
    if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw std::runtime_error("read_binary: truncated input");
    return v;
}
}  // namespace

ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B) {
    ComplexMatrix out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index r = 0; r < B.rows(); ++r)
        for (Eigen::Index s = 0; s < B.cols(); ++s)
            out.block(r * A.rows(), s * A.cols(), A.rows(), A.cols()) = B(r, s) * A;
    return out;
}

bool is_hermitian(const ComplexMatrix& A, double tol) {
    if (A.rows() != A.cols()) return false;
    if (tol < 0) tol = 1e-12 * static_cast<double>(std::max<Eigen::Index>(A.rows(), 1)) * std::max(1.0, A.norm());
    return (A - A.adjoint()).norm() <= tol;
}

double unitarity_defect(const ComplexMatrix& A) {
    return (A.adjoint() * A - ComplexMatrix::Identity(A.cols(), A.cols())).norm();
}

bool is_unitary(const ComplexMatrix& A, double tol) {
    if (A.rows() != A.cols()) return false;
    if (tol < 0) tol = 1e-12 * static_cast<double>(std::max<Eigen::Index>(A.rows(), 1));
    return unitarity_defect(A) <= tol;
}

double operator_norm(const ComplexMatrix& A) {
    if (A.size() == 0) return 0;
    Eigen::BDCSVD<ComplexMatrix> svd(A);
    return svd.singularValues()(0);
}

void write_binary(std::ostream& os, const ComplexMatrix& A) {
    os.write(kMagic.data(), 4);
    put<std::uint32_t>(os, kVersion);
    put<std::uint64_t>(os, static_cast<std::uint64_t>(A.rows()));
    put<std::uint64_t>(os, static_cast<std::uint64_t>(A.cols()));
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j) {
            put<double>(os, A(i, j).real());
            put<double>(os, A(i, j).imag());
        }
    if (!os) throw std::runtime_error("write_binary: stream failure");
}

ComplexMatrix read_binary(std::istream& is) {
    std::array<char, 4> magic{};
    if (!is.read(magic.data(), 4) || magic != kMagic) throw std::runtime_error("read_binary: bad magic");
    if (get<std::uint32_t>(is) != kVersion) throw std::runtime_error("read_binary: unsupported version");
    const auto rows = get<std::uint64_t>(is), cols = get<std::uint64_t>(is);
    if (rows > (1u << 20) || cols > (1u << 20)) throw std::runtime_error("read_binary: implausible dimensions");
    ComplexMatrix A(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j) {
            const double re = get<double>(is), im = get<double>(is);
            A(i, j) = {re, im};
        }
    return A;
}

std::string to_json(const ComplexMatrix& A) {
    nlohmann::json j;
    j["rows"] = A.rows();
    j["cols"] = A.cols();
    auto& data = j["data"] = nlohmann::json::array();
    for (Eigen::Index r = 0; r < A.rows(); ++r)
        for (Eigen::Index c = 0; c < A.cols(); ++c) {
            data.push_back(A(r, c).real());
            data.push_back(A(r, c).imag());
        }
    return j.dump();
}

ComplexMatrix from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const auto rows = j.at("rows").get<Eigen::Index>(), cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(2 * rows * cols))
        throw std::runtime_error("from_json: data length does not match dimensions");
    ComplexMatrix A(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c, k += 2) A(r, c) = {data[k].get<double>(), data[k + 1].get<double>()};
    return A;
}

}  // namespace haarfree::rmt

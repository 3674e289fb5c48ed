#ifndef PLF_QUANTUM_HPP
#define PLF_QUANTUM_HPP

#include <complex>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "plf/scenario.hpp"

namespace plf {

using Complex = std::complex<double>;

class NormalizationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense row-major complex matrix. Dimensions here never exceed 16.
class CMatrix {
public:
    CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    static CMatrix identity(std::size_t n);
    /// |u><v|
    static CMatrix outer(const std::vector<Complex>& u, const std::vector<Complex>& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    CMatrix adjoint() const;
    friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
    friend CMatrix operator+(const CMatrix& a, const CMatrix& b);
    friend CMatrix operator-(const CMatrix& a, const CMatrix& b);
    std::vector<Complex> apply(const std::vector<Complex>& v) const;

    /// Largest entrywise modulus of a - b.
    friend double max_abs_diff(const CMatrix& a, const CMatrix& b);

private:
    std::size_t rows_, cols_;
    std::vector<Complex> data_;
};

/// Kronecker product; the left factor is the more significant index.
CMatrix kron(const CMatrix& a, const CMatrix& b);
std::vector<Complex> kron(const std::vector<Complex>& a, const std::vector<Complex>& b);

/// Normalized pure state.
class StateVector {
public:
    explicit StateVector(std::vector<Complex> amplitudes);

    std::size_t dim() const { return amps_.size(); }
    const std::vector<Complex>& amplitudes() const { return amps_; }
    /// <this|other>
    Complex inner(const StateVector& other) const;
    /// <psi|M|psi>
    Complex expectation(const CMatrix& m) const;

private:
    std::vector<Complex> amps_;
};

/// Projective measurement element on one lab.
class Effect {
public:
    /// Throws std::invalid_argument unless `m` is a Hermitian idempotent within 1e-12.
    explicit Effect(CMatrix m);
    const CMatrix& matrix() const { return m_; }
    std::size_t dim() const { return m_.rows(); }

private:
    CMatrix m_;
};

enum class Party { A, B };

/// (|00> + |01> + |10>)/sqrt(3) in basis |C0 D0>, |C0 D1>, |C1 D0>, |C1 D1>.
StateVector hardy_state();

/// Setting 1 reads the friend: {|0><0|, I - |0><0|}. Setting 2: {|+><+|, I - |+><+|}.
/// Index in the returned list is the outcome label. Both parties are identical.
std::vector<Effect> measurement_effects(Party party, int setting);

/// Born-rule probabilities in Behavior index order.
struct ProbTable {
    ScenarioConfig config;
    std::vector<double> probs;

    double at(const Cell& c) const;
};

/// P(a,b|x,y) = <psi| A_x(a) (x) B_y(b) |psi>. The config must use outcomes {0,1} and
/// settings drawn from {1,2}. Throws NormalizationError on an imaginary residue above
/// 1e-12 or a context sum off by more than 1e-9.
ProbTable born_table(const StateVector& state, const ScenarioConfig& config = ScenarioConfig{});

/// Cells with probability above epsilon are possible.
Behavior possibilistic_collapse(const ProbTable& t, double epsilon);

/// The Hardy state's possibility pattern with both friends, reading at setting 1.
/// epsilon must lie in (0, 1e-3].
Behavior hardy_behavior(double epsilon = 1e-9);

nlohmann::json prob_table_to_json(const ProbTable& t);

}  // namespace plf

#endif

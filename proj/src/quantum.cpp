#include "plf/quantum.hpp"

#include <cmath>

namespace plf {

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::outer(const std::vector<Complex>& u, const std::vector<Complex>& v) {
    CMatrix m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch");
    CMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k)
            for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a(i, k) * b(k, j);
    return out;
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix shape mismatch");
    CMatrix out(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] + b.data_[i];
    return out;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix shape mismatch");
    CMatrix out(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] - b.data_[i];
    return out;
}

std::vector<Complex> CMatrix::apply(const std::vector<Complex>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("vector length mismatch");
    std::vector<Complex> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return INFINITY;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data_.size(); ++i) worst = std::max(worst, std::abs(a.data_[i] - b.data_[i]));
    return worst;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

std::vector<Complex> kron(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    std::vector<Complex> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b) out.push_back(x * y);
    return out;
}

// ---------------------------------------------------------------------------

StateVector::StateVector(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.empty()) throw std::invalid_argument("state vector must have positive dimension");
    double n = 0.0;
    for (const auto& a : amps_) n += std::norm(a);
    if (std::abs(n - 1.0) > 1e-12) throw NormalizationError("state vector is not normalized");
}

Complex StateVector::inner(const StateVector& other) const {
    if (other.dim() != dim()) throw std::invalid_argument("dimension mismatch");
    Complex s = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
    return s;
}

Complex StateVector::expectation(const CMatrix& m) const {
    auto mv = m.apply(amps_);
    Complex s = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * mv[i];
    return s;
}

Effect::Effect(CMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("effect must be square");
    if (max_abs_diff(m_, m_.adjoint()) > 1e-12) throw std::invalid_argument("effect is not Hermitian");
    if (max_abs_diff(m_ * m_, m_) > 1e-12) throw std::invalid_argument("effect is not a projector");
}

// ---------------------------------------------------------------------------

StateVector hardy_state() {
    const double s = 1.0 / std::sqrt(3.0);
    return StateVector({s, s, s, 0.0});
}

std::vector<Effect> measurement_effects(Party /*party*/, int setting) {
    std::vector<Complex> ket;
    if (setting == 1) {
        ket = {1.0, 0.0};
    } else if (setting == 2) {
        const double h = 1.0 / std::sqrt(2.0);
        ket = {h, h};
    } else {
        throw std::invalid_argument("setting must be 1 or 2");
    }
    CMatrix p = CMatrix::outer(ket, ket);
    return {Effect(p), Effect(CMatrix::identity(2) - p)};
}

double ProbTable::at(const Cell& c) const {
    std::size_t idx = ((config.a_index(c.a) * config.num_b() + config.b_index(c.b)) * config.num_x() +
                       config.x_index(c.x)) * config.num_y() + config.y_index(c.y);
    return probs.at(idx);
}

ProbTable born_table(const StateVector& state, const ScenarioConfig& config) {
    config.validate();
    if (state.dim() != 4) throw std::invalid_argument("born_table expects a two-qubit state");
    if (config.a_values != std::vector<int>{0, 1} || config.b_values != std::vector<int>{0, 1})
        throw std::invalid_argument("born_table supports outcomes {0,1} only");

    ProbTable t{config, std::vector<double>(config.num_cells(), 0.0)};
    for (std::size_t ix = 0; ix < config.num_x(); ++ix) {
        auto alice = measurement_effects(Party::A, config.x_values[ix]);
        for (std::size_t iy = 0; iy < config.num_y(); ++iy) {
            auto bob = measurement_effects(Party::B, config.y_values[iy]);
            double total = 0.0;
            for (std::size_t ia = 0; ia < 2; ++ia) {
                for (std::size_t ib = 0; ib < 2; ++ib) {
                    Complex p = state.expectation(kron(alice[ia].matrix(), bob[ib].matrix()));
                    if (std::abs(p.imag()) > 1e-12) throw NormalizationError("probability has an imaginary part");
                    double pr = p.real();
                    t.probs[((ia * 2 + ib) * config.num_x() + ix) * config.num_y() + iy] = pr;
                    total += pr;
                }
            }
            if (std::abs(total - 1.0) > 1e-9)
                throw NormalizationError("context probabilities sum to " + std::to_string(total));
        }
    }
    return t;
}

Behavior possibilistic_collapse(const ProbTable& t, double epsilon) {
    std::vector<bool> possible(t.probs.size());
    for (std::size_t i = 0; i < t.probs.size(); ++i) possible[i] = t.probs[i] > epsilon;
    return Behavior(t.config, std::move(possible));
}

Behavior hardy_behavior(double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1e-3)) throw std::invalid_argument("epsilon must lie in (0, 1e-3]");
    return possibilistic_collapse(born_table(hardy_state()), epsilon);
}

nlohmann::json prob_table_to_json(const ProbTable& t) {
    const auto& c = t.config;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t ia = 0; ia < c.num_a(); ++ia)
        for (std::size_t ib = 0; ib < c.num_b(); ++ib)
            for (std::size_t ix = 0; ix < c.num_x(); ++ix)
                for (std::size_t iy = 0; iy < c.num_y(); ++iy)
                    rows.push_back({{"a", c.a_values[ia]},
                                    {"b", c.b_values[ib]},
                                    {"x", c.x_values[ix]},
                                    {"y", c.y_values[iy]},
                                    {"p", t.probs[((ia * c.num_b() + ib) * c.num_x() + ix) * c.num_y() + iy]}});
    return {{"basis", "C0D0,C0D1,C1D0,C1D1"}, {"probabilities", rows}};
}

}  // namespace plf

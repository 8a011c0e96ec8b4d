#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fuzzdyn/errors.hpp"
#include "fuzzdyn/rational.hpp"

namespace fuzzdyn {

using PointId = std::uint32_t;

// Finite metric space with an exact rational distance matrix. Immutable after
// construction; shared by reference-counted handle so that sets and fuzzy sets
// over the space stay cheap to copy.
class FiniteMetricSpace {
public:
    using Handle = std::shared_ptr<const FiniteMetricSpace>;

    static Handle create(std::vector<std::vector<Rational>> matrix,
                         std::vector<std::string> labels = {}) {
        return Handle(new FiniteMetricSpace(std::move(matrix), std::move(labels)));
    }

    std::size_t size() const { return n_; }

    const Rational& distance(PointId i, PointId j) const { return dist_[i * n_ + j]; }

    const Rational& diameter() const { return diameter_; }

    // Smallest nonzero distance; the space's resolution. Zero on one point.
    const Rational& min_positive_distance() const { return min_positive_; }

    const std::string& label(PointId i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    FiniteMetricSpace(std::vector<std::vector<Rational>> matrix, std::vector<std::string> labels)
        : labels_(std::move(labels)) {
        n_ = matrix.size();
        if (n_ == 0) throw EmptySpace();
        for (std::size_t i = 0; i < n_; ++i)
            if (matrix[i].size() != n_)
                throw MetricViolation("square", "distance matrix is not square", static_cast<int>(i));
        dist_.reserve(n_ * n_);
        for (const auto& row : matrix)
            for (const auto& d : row) dist_.push_back(d);

        for (std::size_t i = 0; i < n_; ++i) {
            if (dist_[i * n_ + i] != 0)
                throw MetricViolation("diagonal", "dist[" + std::to_string(i) + "][" + std::to_string(i) + "] != 0",
                                      static_cast<int>(i), static_cast<int>(i));
            for (std::size_t j = i + 1; j < n_; ++j) {
                if (dist_[i * n_ + j] != dist_[j * n_ + i])
                    throw MetricViolation("symmetry", "dist[" + std::to_string(i) + "][" + std::to_string(j) + "] != dist[" +
                                          std::to_string(j) + "][" + std::to_string(i) + "]",
                                          static_cast<int>(i), static_cast<int>(j));
                if (dist_[i * n_ + j] <= 0)
                    throw MetricViolation("positivity", "dist[" + std::to_string(i) + "][" + std::to_string(j) + "] <= 0 for distinct points",
                                          static_cast<int>(i), static_cast<int>(j));
            }
        }
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                for (std::size_t k = 0; k < n_; ++k)
                    if (dist_[i * n_ + k] > dist_[i * n_ + j] + dist_[j * n_ + k])
                        throw MetricViolation("triangle", "dist[" + std::to_string(i) + "][" + std::to_string(k) +
                                              "] > dist[..][" + std::to_string(j) + "] + dist[" + std::to_string(j) + "][..]",
                                              static_cast<int>(i), static_cast<int>(j), static_cast<int>(k));

        diameter_ = 0;
        min_positive_ = 0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j) {
                const auto& d = dist_[i * n_ + j];
                if (d > diameter_) diameter_ = d;
                if (min_positive_ == 0 || d < min_positive_) min_positive_ = d;
            }

        if (labels_.empty()) {
            labels_.reserve(n_);
            for (std::size_t i = 0; i < n_; ++i) labels_.push_back("p" + std::to_string(i));
        } else if (labels_.size() != n_) {
            throw Error("label count does not match point count");
        }
    }

    std::size_t n_;
    std::vector<Rational> dist_;  // row-major n*n
    Rational diameter_;
    Rational min_positive_;
    std::vector<std::string> labels_;
};

using SpaceHandle = FiniteMetricSpace::Handle;

inline SpaceHandle build_space(std::vector<std::vector<Rational>> matrix,
                               std::vector<std::string> labels = {}) {
    return FiniteMetricSpace::create(std::move(matrix), std::move(labels));
}

// Points on the rational line with |x - y| distance.
inline SpaceHandle line_space(const std::vector<Rational>& coords) {
    std::vector<std::vector<Rational>> m(coords.size(), std::vector<Rational>(coords.size()));
    std::vector<std::string> labels;
    labels.reserve(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        labels.push_back(to_string(coords[i]));
        for (std::size_t j = 0; j < coords.size(); ++j) m[i][j] = rat_abs(coords[i] - coords[j]);
    }
    return build_space(std::move(m), std::move(labels));
}

// Points on the unit circle R/Z with d(a,b) = min(|a-b|, 1-|a-b|).
inline SpaceHandle circle_space(const std::vector<Rational>& coords) {
    std::vector<std::vector<Rational>> m(coords.size(), std::vector<Rational>(coords.size()));
    std::vector<std::string> labels;
    labels.reserve(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        labels.push_back(to_string(coords[i]));
        for (std::size_t j = 0; j < coords.size(); ++j) {
            Rational d = rat_abs(coords[i] - coords[j]);
            m[i][j] = rat_min(d, Rational(1 - d));
        }
    }
    return build_space(std::move(m), std::move(labels));
}

// All distances 1; used by identity(n) model systems.
inline SpaceHandle uniform_space(std::size_t n) {
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(1)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 0;
    return build_space(std::move(m));
}

}  // namespace fuzzdyn

#include "ballwidth/coeff_vector.hpp"

#include "ballwidth/errors.hpp"

#include <algorithm>
#include <sstream>

namespace ballwidth {

namespace {

std::vector<std::int64_t> block_offsets(int d, int max_degree) {
  std::vector<std::int64_t> off(max_degree + 2, 0);
  for (int n = 0; n <= max_degree; ++n) off[n + 1] = off[n] + block_dim(d, n);
  return off;
}

}  // namespace

CoeffVector::CoeffVector(const SpaceParams& params, int max_degree)
    : params_(params), max_degree_(max_degree), offsets_(block_offsets(params.d, max_degree)) {
  if (max_degree < 0) throw DomainError("CoeffVector: max_degree must be >= 0");
  data_ = Eigen::VectorXd::Zero(offsets_.back());
}

CoeffVector::CoeffVector(const SpaceParams& params, int max_degree, Eigen::VectorXd data)
    : CoeffVector(params, max_degree) {
  if (data.size() != data_.size()) {
    std::ostringstream msg;
    msg << "CoeffVector: expected " << data_.size() << " coefficients for degree " << max_degree
        << ", got " << data.size();
    throw DomainError(msg.str());
  }
  data_ = std::move(data);
}

std::int64_t CoeffVector::check_index(BasisIndex idx) const {
  if (idx.n < 0 || idx.n > max_degree_) throw DomainError("coefficient degree out of range");
  if (idx.k < 1 || idx.k > block_size(idx.n)) throw DomainError("coefficient k outside block");
  return offsets_[idx.n] + idx.k - 1;
}

double& CoeffVector::at(BasisIndex idx) { return data_(check_index(idx)); }
double CoeffVector::at(BasisIndex idx) const { return data_(check_index(idx)); }

CoeffVector CoeffVector::resized(int max_degree) const {
  CoeffVector out(params_, max_degree);
  const auto n = std::min(out.size(), size());
  out.data_.head(n) = data_.head(n);
  return out;
}

int CoeffVector::effective_degree() const {
  for (int n = max_degree_; n >= 0; --n)
    if ((block(n).array() != 0.0).any()) return n;
  return -1;
}

CoeffVector& CoeffVector::operator+=(const CoeffVector& o) {
  if (o.max_degree_ > max_degree_) *this = resized(o.max_degree_);
  data_.head(o.size()) += o.data_;
  return *this;
}

CoeffVector& CoeffVector::operator-=(const CoeffVector& o) {
  if (o.max_degree_ > max_degree_) *this = resized(o.max_degree_);
  data_.head(o.size()) -= o.data_;
  return *this;
}

CoeffVector& CoeffVector::operator*=(double a) {
  data_ *= a;
  return *this;
}

CoeffVector operator+(CoeffVector a, const CoeffVector& b) { return a += b; }
CoeffVector operator-(CoeffVector a, const CoeffVector& b) { return a -= b; }
CoeffVector operator*(double s, CoeffVector a) { return a *= s; }

}  // namespace ballwidth

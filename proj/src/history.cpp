#include "ddekoop/history.hpp"

#include <algorithm>
#include <cmath>

#include "ddekoop/error.hpp"

namespace ddekoop {

KnotTable::KnotTable(double t0, double h, std::size_t dim, std::vector<double> values,
                     std::vector<double> slopes, Interpolation mode)
    : t0_(t0), h_(h), dim_(dim), values_(std::move(values)), slopes_(std::move(slopes)), mode_(mode) {
  require(dim_ > 0, "knot table needs a positive dimension");
  require(h_ > 0.0, "knot spacing must be positive");
  require(values_.size() % dim_ == 0, "knot values are not a whole number of rows");
  const std::size_t count = values_.size() / dim_;
  if (mode_ == Interpolation::Hermite) {
    require(slopes_.size() == values_.size(), "hermite table needs one slope per value");
  }
  knots_.resize(count);
  for (std::size_t i = 0; i < count; ++i) knots_[i] = t0_ + static_cast<double>(i) * h_;
}

KnotTable::KnotTable(double t0, double h, std::size_t dim, std::vector<double> values,
                     std::vector<double> slopes, Interpolation mode, double end)
    : KnotTable(t0, h, dim, std::move(values), std::move(slopes), mode) {
  if (!knots_.empty()) knots_.back() = end;
}

void KnotTable::push_back(std::span<const double> value, std::span<const double> slope) {
  knots_.push_back(t0_ + static_cast<double>(knots_.size()) * h_);
  values_.insert(values_.end(), value.begin(), value.end());
  slopes_.insert(slopes_.end(), slope.begin(), slope.end());
}

void KnotTable::eval(double t, std::span<double> out) const { eval_prefix(t, knots_.size(), out); }

void KnotTable::eval_prefix(double t, std::size_t count, std::span<double> out) const {
  if (count == 1 || t <= knots_[0]) {
    std::copy_n(values_.begin(), dim_, out.begin());
    return;
  }
  const std::size_t last = count - 1;
  if (t >= knots_[last]) {
    std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(last * dim_), dim_, out.begin());
    return;
  }

  auto i = static_cast<std::size_t>(std::clamp(std::floor((t - t0_) / h_), 0.0,
                                               static_cast<double>(last - 1)));
  // The floor can be one off when t sits within an ulp of a knot.
  if (t < knots_[i] && i > 0) --i;
  if (t >= knots_[i + 1] && i + 1 < last) ++i;

  const double* v0 = values_.data() + i * dim_;
  if (t == knots_[i]) {
    std::copy_n(v0, dim_, out.begin());
    return;
  }
  const double* v1 = v0 + dim_;

  switch (mode_) {
    case Interpolation::Linear: {
      const double s = (t - knots_[i]) / h_;
      for (std::size_t c = 0; c < dim_; ++c) out[c] = v0[c] + s * (v1[c] - v0[c]);
      return;
    }
    case Interpolation::Hermite: {
      const double s = (t - knots_[i]) / h_;
      const double s2 = s * s;
      const double s3 = s2 * s;
      const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
      const double h10 = s3 - 2.0 * s2 + s;
      const double h01 = -2.0 * s3 + 3.0 * s2;
      const double h11 = s3 - s2;
      const double* m0 = slopes_.data() + i * dim_;
      const double* m1 = m0 + dim_;
      for (std::size_t c = 0; c < dim_; ++c) {
        out[c] = h00 * v0[c] + h10 * h_ * m0[c] + h01 * v1[c] + h11 * h_ * m1[c];
      }
      return;
    }
    default:
      std::copy_n(v0, dim_, out.begin());
      return;
  }
}

namespace {

class TableSource final : public HistorySource {
 public:
  explicit TableSource(KnotTable table) : table_(std::move(table)) {}
  std::size_t dim() const noexcept override { return table_.dim(); }
  Interpolation mode() const noexcept override { return table_.mode(); }
  void eval(double t, std::span<double> out) const override { table_.eval(t, out); }

 private:
  KnotTable table_;
};

class ConstantSource final : public HistorySource {
 public:
  explicit ConstantSource(std::vector<double> value) : value_(std::move(value)) {}
  std::size_t dim() const noexcept override { return value_.size(); }
  Interpolation mode() const noexcept override { return Interpolation::Constant; }
  void eval(double, std::span<double> out) const override {
    std::copy(value_.begin(), value_.end(), out.begin());
  }

 private:
  std::vector<double> value_;
};

class FunctionSource final : public HistorySource {
 public:
  FunctionSource(std::size_t dim, HistorySegment::Callable f) : dim_(dim), f_(std::move(f)) {}
  std::size_t dim() const noexcept override { return dim_; }
  Interpolation mode() const noexcept override { return Interpolation::Function; }
  void eval(double t, std::span<double> out) const override { f_(t, out); }

 private:
  std::size_t dim_;
  HistorySegment::Callable f_;
};

}  // namespace

HistorySegment::HistorySegment(std::shared_ptr<const HistorySource> source, double delay,
                               double offset)
    : source_(std::move(source)), delay_(delay), offset_(offset) {
  require(source_ != nullptr, "history segment needs a source");
  require(delay_ > 0.0, "history delay must be positive");
}

HistorySegment HistorySegment::constant(double delay, std::span<const double> value) {
  require(!value.empty(), "constant history needs a value");
  return HistorySegment(
      std::make_shared<ConstantSource>(std::vector<double>(value.begin(), value.end())), delay,
      0.0);
}

HistorySegment HistorySegment::constant(double delay, const Eigen::VectorXd& value) {
  return constant(delay, std::span<const double>(value.data(), static_cast<std::size_t>(value.size())));
}

HistorySegment HistorySegment::hermite(double delay, std::size_t dim, std::vector<double> values,
                                       std::vector<double> slopes) {
  require(dim > 0 && values.size() % dim == 0, "hermite history: bad value array shape");
  const std::size_t count = values.size() / dim;
  require(count >= 2, "hermite history needs at least two samples");
  const double h = delay / static_cast<double>(count - 1);
  KnotTable table(-delay, h, dim, std::move(values), std::move(slopes), Interpolation::Hermite, 0.0);
  return HistorySegment(std::make_shared<TableSource>(std::move(table)), delay, 0.0);
}

HistorySegment HistorySegment::linear(double delay, std::size_t dim, std::vector<double> values) {
  require(dim > 0 && values.size() % dim == 0, "linear history: bad value array shape");
  const std::size_t count = values.size() / dim;
  require(count >= 2, "linear history needs at least two samples");
  const double h = delay / static_cast<double>(count - 1);
  KnotTable table(-delay, h, dim, std::move(values), {}, Interpolation::Linear, 0.0);
  return HistorySegment(std::make_shared<TableSource>(std::move(table)), delay, 0.0);
}

HistorySegment HistorySegment::function(double delay, std::size_t dim, Callable f) {
  require(dim > 0, "function history needs a positive dimension");
  return HistorySegment(std::make_shared<FunctionSource>(dim, std::move(f)), delay, 0.0);
}

Interpolation HistorySegment::interpolation() const noexcept {
  return source_ ? source_->mode() : Interpolation::Constant;
}

void HistorySegment::eval(double theta, std::span<double> out) const {
  source_->eval(offset_ + theta, out);
}

Eigen::VectorXd HistorySegment::operator()(double theta) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(dim()));
  eval(theta, {out.data(), dim()});
  return out;
}

}  // namespace ddekoop

#pragma once

#include <span>
#include <string>
#include <vector>

namespace metahom {

// One study's 2x2 table: events / totals in the treatment and control arms.
class StudyTable {
 public:
  // Throws DomainError unless 0 <= x1 <= n1, 0 <= x0 <= n0, n1, n0 >= 1.
  StudyTable(int x1, int n1, int x0, int n0, std::string label = {});

  int x1() const noexcept { return x1_; }
  int n1() const noexcept { return n1_; }
  int x0() const noexcept { return x0_; }
  int n0() const noexcept { return n0_; }
  const std::string& label() const noexcept { return label_; }

  int total_events() const noexcept { return x1_ + x0_; }
  int total_size() const noexcept { return n1_ + n0_; }

  // Margin carries no conditional information (no events or all events).
  bool is_degenerate() const noexcept {
    return total_events() == 0 || total_events() == total_size();
  }
  bool has_zero_cell() const noexcept {
    return x1_ == 0 || x1_ == n1_ || x0_ == 0 || x0_ == n0_;
  }

  // Treatment and control exchanged.
  StudyTable swapped() const { return StudyTable(x0_, n0_, x1_, n1_, label_); }

  friend bool operator==(const StudyTable&, const StudyTable&) = default;

 private:
  int x1_;
  int n1_;
  int x0_;
  int n0_;
  std::string label_;
};

// Ordered collection of at least two studies.
class MetaDataset {
 public:
  explicit MetaDataset(std::vector<StudyTable> studies);

  std::span<const StudyTable> studies() const noexcept { return studies_; }
  std::size_t size() const noexcept { return studies_.size(); }
  const StudyTable& operator[](std::size_t i) const { return studies_[i]; }

  // Degrees of freedom shared by every homogeneity test: m - 1.
  int df() const noexcept { return static_cast<int>(studies_.size()) - 1; }

  MetaDataset swapped_arms() const;

  operator std::span<const StudyTable>() const noexcept { return studies_; }

  friend bool operator==(const MetaDataset&, const MetaDataset&) = default;

 private:
  std::vector<StudyTable> studies_;
};

// How the odds-ratio based tests (Q, Bliss, Woolf) treat tables with a zero
// cell.
//   half    - add 0.5 to all four cells; tables with no events or all events
//             in both arms are dropped
//   none    - zero cells raise ZeroCellError
//   exclude - tables with a zero cell are dropped from the sums
enum class CorrectionPolicy { half, none, exclude };

const char* to_string(CorrectionPolicy policy) noexcept;
CorrectionPolicy parse_correction(const std::string& text);

struct EffectEstimate {
  double log_or = 0.0;
  double se = 0.0;
  bool corrected = false;
};

// Log odds ratio and its standard error. With the exclude policy a zero cell
// raises ZeroCellError exactly as with none; callers that drop such studies
// check has_zero_cell() first.
EffectEstimate log_odds_ratio(const StudyTable& table, CorrectionPolicy policy);

// Cochran-Mantel-Haenszel pooled odds ratio on raw counts.
double mh_pooled_or(std::span<const StudyTable> studies);

// E(X1 | X, OR): the admissible root of
//   (OR-1) E^2 - ((X+n1) OR + (n0-X)) E + X n1 OR = 0.
double conditional_expected_count(const StudyTable& table, double odds_ratio);

// var(X1 | X, OR) given the conditional expectation e.
double conditional_variance(const StudyTable& table, double e);

}  // namespace metahom

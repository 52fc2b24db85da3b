#include "metahom/case_study.hpp"

namespace metahom {

MetaDataset levothyroxine_preterm_dataset() {
  // events / total, treatment arm then control arm
  return MetaDataset({
      {40, 339, 47, 338, "Casey et al. (2017)"},
      {4, 82, 30, 284, "Maraka et al. (2016)"},
      {60, 843, 236, 4562, "Maraka et al. (2017)"},
      {4, 56, 14, 58, "Nazarpour et al. (2017)"},
      {18, 183, 21, 183, "Nazarpour et al. (2018)"},
      {0, 28, 9, 168, "Wang et al. (2012)"},
      {7, 62, 6, 31, "Zhao et al. (2018)"},
  });
}

}  // namespace metahom

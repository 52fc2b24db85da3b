#pragma once

#include "metahom/study.hpp"

namespace metahom {

// Levothyroxine vs. no treatment and preterm delivery among women with
// subclinical hypothyroidism: seven studies.
MetaDataset levothyroxine_preterm_dataset();

}  // namespace metahom

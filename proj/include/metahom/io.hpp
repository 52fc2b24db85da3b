#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "metahom/lancaster.hpp"
#include "metahom/simulation.hpp"
#include "metahom/study.hpp"

namespace metahom {

// Required dataset header, byte for byte.
inline constexpr const char* kDatasetHeader =
    "study,events_treatment,total_treatment,events_control,total_control";

// Reads the dataset CSV (UTF-8, LF or CRLF, optional BOM). Throws ParseError
// with the offending line number.
MetaDataset read_dataset_csv(std::istream& in);
MetaDataset read_dataset_csv(const std::filesystem::path& path);

void write_dataset_csv(std::ostream& out, const MetaDataset& ds);

// "p:df" or "p,df".
PValueEntry parse_pvalue_pair(const std::string& text);

// CSV with header "p_value,df".
std::vector<PValueEntry> read_pvalue_csv(std::istream& in);

// Flat "key = value" simulation config. m, beta and tau2 accept
// comma-separated lists and expand into a grid; rhos is a list; every other
// key takes one value. Blank lines and '#' comments are ignored; unknown
// keys raise ConfigError.
std::vector<SimConfig> parse_sim_config(std::istream& in);
std::vector<SimConfig> parse_sim_config(const std::filesystem::path& path);

// RFC 4180 style quoting when the field needs it.
std::string csv_field(const std::string& s);

}  // namespace metahom

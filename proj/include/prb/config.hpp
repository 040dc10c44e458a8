#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "prb/runner.hpp"

namespace prb {

// Flat text config: one `section.key = value` per line, '#' starts a comment.
// Unknown keys, malformed values and out-of-range values are ConfigErrors
// naming the key and the accepted range. Overrides ("key=value") are applied
// after the file, in order; a later write to the same key wins.

ExperimentConfig parse_config(const std::filesystem::path& path,
                              const std::vector<std::string>& overrides = {});

ExperimentConfig parse_config_text(std::string_view text,
                                   const std::vector<std::string>& overrides = {});

/// Applies one `key = value` assignment.
void apply_setting(ExperimentConfig& cfg, std::string_view key,
                   std::string_view value);

/// Every key with its resolved value, one `key = value` per line, in a
/// format parse_config_text() reads back to the same config.
std::string render_config(const ExperimentConfig& cfg);

std::vector<std::string_view> config_keys();

}  // namespace prb

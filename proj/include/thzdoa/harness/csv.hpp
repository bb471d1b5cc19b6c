#pragma once

#include <ostream>
#include <string>

#include "thzdoa/harness/campaign.hpp"

namespace thzdoa::harness {

std::string csv_header();
std::string csv_row(const RmseRow& row);
/// Header plus one line per row, LF line endings.
void write_csv(std::ostream& out, const RmseCurve& curve);

/// One JSON object per (snr point, trial).
void write_trial_log(std::ostream& out, const CampaignResult& result);

}  // namespace thzdoa::harness

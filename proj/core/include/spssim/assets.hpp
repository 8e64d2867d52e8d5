#pragma once

#include <string_view>

// Text of the data assets shipped in core/data/, embedded at build time.
namespace spssim::assets {

std::string_view tbs_table_text();
std::string_view bler_default_text();

}  // namespace spssim::assets

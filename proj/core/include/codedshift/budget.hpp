#pragma once

namespace codedshift {

// Cap on retry doublings for semicomputable loops. Set by CODEDSHIFT_BUDGET, default 24.
int retry_budget();

}  // namespace codedshift

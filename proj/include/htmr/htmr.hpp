#pragma once

#include "htmr/error.hpp"
#include "htmr/types.hpp"
#include "htmr/tmr_logic.hpp"
#include "htmr/reliability.hpp"
#include "htmr/fault_model.hpp"
#include "htmr/network.hpp"
#include "htmr/harness.hpp"
#include "htmr/output.hpp"
#include "htmr/documents.hpp"

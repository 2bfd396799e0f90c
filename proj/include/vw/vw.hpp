#pragma once

#include "vw/cuts.hpp"
#include "vw/cuts_oracle.hpp"
#include "vw/error.hpp"
#include "vw/generate.hpp"
#include "vw/ingest.hpp"
#include "vw/layout.hpp"
#include "vw/order.hpp"
#include "vw/parallel.hpp"
#include "vw/render.hpp"
#include "vw/stats.hpp"
#include "vw/timestamp.hpp"
#include "vw/variants.hpp"
#include "vw/xes.hpp"

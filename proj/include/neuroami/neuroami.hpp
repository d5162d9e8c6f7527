#pragma once

#include "neuroami/config.hpp"
#include "neuroami/encoder.hpp"
#include "neuroami/error.hpp"
#include "neuroami/ingest.hpp"
#include "neuroami/learner.hpp"
#include "neuroami/pipeline.hpp"
#include "neuroami/trace_io.hpp"

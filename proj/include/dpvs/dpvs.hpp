#pragma once

#include "dpvs/analysis.hpp"
#include "dpvs/beta_sampler.hpp"
#include "dpvs/config.hpp"
#include "dpvs/datasets.hpp"
#include "dpvs/dp_variance.hpp"
#include "dpvs/draw_store.hpp"
#include "dpvs/errors.hpp"
#include "dpvs/experiment.hpp"
#include "dpvs/gibbs_engine.hpp"
#include "dpvs/rand_core.hpp"
#include "dpvs/sparse_priors.hpp"
#include "dpvs/text_io.hpp"

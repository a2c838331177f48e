#pragma once

#include "softpen/builders.hpp"
#include "softpen/driver/schedules.hpp"
#include "softpen/driver/solve.hpp"
#include "softpen/errors.hpp"
#include "softpen/forms.hpp"
#include "softpen/gradcheck.hpp"
#include "softpen/io/problem_json.hpp"
#include "softpen/io/records.hpp"
#include "softpen/model.hpp"
#include "softpen/penalized.hpp"
#include "softpen/rng.hpp"
#include "softpen/softplus.hpp"
#include "softpen/solvers/apg.hpp"
#include "softpen/solvers/catalyst.hpp"
#include "softpen/solvers/svrg.hpp"
#include "softpen/solvers/types.hpp"
#include "softpen/zoo/entrywise.hpp"
#include "softpen/zoo/instance.hpp"
#include "softpen/zoo/inverse_kkt.hpp"
#include "softpen/zoo/smoothing.hpp"

#ifndef DSD_DSD_HPP
#define DSD_DSD_HPP

#include "dsd/asymptotics.hpp"
#include "dsd/closed_forms.hpp"
#include "dsd/distribution.hpp"
#include "dsd/error.hpp"
#include "dsd/estimators.hpp"
#include "dsd/random.hpp"
#include "dsd/sample.hpp"
#include "dsd/series.hpp"
#include "dsd/simulate.hpp"
#include "dsd/spacings.hpp"

#endif  // DSD_DSD_HPP

class Config:
    # Logging
    LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    LOG_LEVEL = 'WARNING'

    # Planner
    EXHAUSTIVE_LIMIT = 20  # candidates; plan_exact refuses larger sets
    SUM_RTOL = 1e-9  # relative slack when comparing rate and power sums
    DEFAULT_METHOD = 'greedy'

    # Cores
    DEFAULT_CORE_BW_GHZ = 1.0
    DEFAULT_N_BW_CORES = 32
    DEFAULT_N_SPATIAL_MAX = 8
    DEFAULT_UL_SHARE = 0.5

    # Power model
    DEFAULT_PA_PER_CORE_W = 0.1
    DEFAULT_FOM_BASE_J = 1e-12
    DEFAULT_F_CORNER_HZ = 1e9
    DEFAULT_FOM_ALPHA = 1.0
    DEFAULT_ENOB = 8.0
    DEFAULT_OVERHEAD_FACTOR = 10.0

    # Traffic
    DEFAULT_TRACE_STEPS = 24
    DEFAULT_STEP_S = 3600.0

    # Report precision (decimal places)
    DB_DECIMALS = 2
    RATE_DECIMALS = 2
    WATT_DECIMALS = 3

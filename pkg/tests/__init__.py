# Test suite for the MCC planner

"""Physical models: UAV propulsion power and uplink radio."""

"""Self-similar dendrites generated by polygonal tree systems in the plane."""

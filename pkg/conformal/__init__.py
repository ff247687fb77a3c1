"""
Conformal maps and the example symbols built from them.
"""
from conformal.maps import (ConformalMap, SectorAnnulusParams, blaschke, disk_automorphism,
                            rectangle_to_disk, sector_annulus_map)
from conformal.examples import (EXAMPLES, ExampleSymbol, example_symbol, locate_zeros,
                                peel_principal_parts, univalence_evidence)

# Decision Diagram Blow-up Lab Configuration Module

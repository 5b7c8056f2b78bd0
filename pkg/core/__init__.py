# MAPFlow Core Module

int f49(int a)
{
    a = a + 0;
    a = a + 1;
    a = a + 2;
    a = a + 3;
    a = a + 4;
    a = a + 5;
    a = a + 6;
    a = sizeof(int) + a;
    return a;
}

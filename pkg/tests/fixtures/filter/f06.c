int f06(int a)
{
    a = a + 0;
    a = a + 1;
    a = a + 2;
    /* a note about the return */
    return a;
}
